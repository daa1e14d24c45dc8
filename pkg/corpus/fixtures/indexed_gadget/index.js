function pick(list) {
  const first = list[0];
  const { timeout = 1000 } = first;
  return runner(timeout);
}

module.exports = { pick: pick };
