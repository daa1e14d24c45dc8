function guardedSet(target, key, subkey, value) {
  if (key === '__proto__' || key === 'constructor' || key === 'prototype') {
    return target;
  }
  const box = target[key] || {};
  box[subkey] = value;
  target[key] = box;
  return target;
}

module.exports = { guardedSet };
