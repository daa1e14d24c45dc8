function buildEnv(opts) {
  const env = opts.env || {};
  const envPairs = [];
  for (const key in env) {
    envPairs.push(`${key}=${env[key]}`);
  }
  opts.envPairs = envPairs;
  return envPairs;
}

function spawn(file, args) {
  const opts = { file: file, args: args || [] };
  buildEnv(opts);
  const handle = new Process();
  return handle.spawn(opts);
}

module.exports = { spawn };
