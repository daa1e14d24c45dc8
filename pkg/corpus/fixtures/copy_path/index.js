function isObj(val) {
  return typeof val === 'object' && val !== null;
}

function copyPath(to, from, path) {
  const p = path[0];
  if (path.length === 1) {
    to[p] = from[p];
    return to;
  }
  if (!isObj(to[p])) {
    to[p] = {};
  }
  copyPath(to[p], from[p], path.slice(1));
  return to;
}

module.exports = { copyPath };
