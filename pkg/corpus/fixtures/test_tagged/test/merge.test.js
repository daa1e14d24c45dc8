function applyFixture(target, key, prop, value) {
  const slot = target[key];
  slot[prop] = value;
  return target;
}

module.exports = { applyFixture: applyFixture };
