function normalize(opts) {
  const out = { file: opts.file, args: opts.args || [] };
  const env = opts.env || {};
  const pairs = [];
  for (const key in env) {
    pairs.push(key + '=' + env[key]);
  }
  out.envPairs = pairs;
  return out;
}

function spawn(file, args) {
  return normalize({ file: file, args: args });
}

module.exports = { spawn: spawn, normalize: normalize };
