function writePath(target, key, subkey, value) {
  const slot = target[key];
  slot[subkey] = value;
  return target;
}

function run(req) {
  const applied = writePath.bind(null, {});
  return applied(req.key, req.subkey, req.value);
}

module.exports = { run };
