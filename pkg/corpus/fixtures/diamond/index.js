function setDeep(obj, outer, inner, value) {
  const bucket = obj[outer];
  bucket[inner] = value;
  return obj;
}

function fromBody(req) {
  return setDeep({}, req.a, req.b, req.c);
}

function fromQuery(req) {
  return setDeep({}, req.x, req.y, req.z);
}

module.exports = { fromBody, fromQuery };
