function setAll(obj, pairs) {
  for (const pair of pairs) {
    const target = obj[pair.scope];
    target[pair.key] = pair.value;
  }
  return obj;
}

module.exports = { setAll };
