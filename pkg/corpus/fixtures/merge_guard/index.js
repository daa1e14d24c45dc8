function mergeSafe(target, source) {
  for (const key in source) {
    if (key === '__proto__' || key === 'constructor' || key === 'prototype') {
      continue;
    }
    if (typeof target[key] === 'object' && target[key] !== null &&
        typeof source[key] === 'object' && source[key] !== null) {
      mergeSafe(target[key], source[key]);
    } else {
      target[key] = source[key];
    }
  }
  return target;
}

module.exports = { mergeSafe };
