function setPath(root, path, value) {
  const parts = path.split('.');
  let node = root;
  let i = 0;
  while (i < parts.length - 1) {
    node = node[parts[i]];
    i += 1;
  }
  node[parts[parts.length - 1]] = value;
  return root;
}

module.exports = { setPath };
