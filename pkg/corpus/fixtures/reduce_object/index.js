function reduceObject(target, source) {
  return Object.keys(source).reduce(function (acc, key) {
    if (typeof acc[key] === 'object' && acc[key] !== null &&
        typeof source[key] === 'object' && source[key] !== null) {
      reduceObject(acc[key], source[key]);
    } else {
      acc[key] = source[key];
    }
    return acc;
  }, target);
}

module.exports = { reduceObject };
