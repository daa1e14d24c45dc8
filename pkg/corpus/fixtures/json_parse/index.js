function ingest(raw) {
  const update = JSON.parse(raw);
  const root = {};
  const node = root[update.path];
  node[update.key] = update.value;
  return root;
}

module.exports = { ingest };
