function assign(root, path, key, value) {
  const node = root[path];
  node[key] = value;
  return root;
}

module.exports = { assign: assign };
