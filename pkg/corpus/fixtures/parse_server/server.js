function expandResultOnKeyPath(object, key, value) {
  if (key.indexOf('.') < 0) {
    object[key] = value[key];
    return object;
  }
  const path = key.split('.');
  const firstKey = path[0];
  const nextPath = path.slice(1).join('.');
  object[firstKey] = expandResultOnKeyPath(
    object[firstKey] || {}, nextPath, value[firstKey]);
  return object;
}

function sanitizeKeys(response, query) {
  let result = response;
  if (query.keys) {
    result = expandResultOnKeyPath({}, query.keys, response);
  }
  return result;
}

function handleGet(req) {
  const response = req.body || {};
  return sanitizeKeys(response, req.query);
}

module.exports = { handleGet };
