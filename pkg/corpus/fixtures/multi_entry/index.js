function normalizeSpawnArgs(opts) {
  const env = opts.env || {};
  const out = { file: opts.file, args: opts.args || [] };
  out.envPairs = env;
  return out;
}

function spawn(opts) {
  return internalSpawn(normalizeSpawnArgs(opts));
}

function spawnSync(opts) {
  return internalSpawnSync(normalizeSpawnArgs(opts));
}

function exec(opts) {
  return spawn(opts);
}

module.exports = { spawn: spawn, spawnSync: spawnSync, exec: exec };
