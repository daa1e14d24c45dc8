function applyUpdate(state, update) {
  const slot = state[update.path];
  slot[update.key] = update.value;
  return state;
}

function parseRequest(req) {
  return applyUpdate({}, req.body);
}

function route(req) {
  return parseRequest(req);
}

module.exports = { route };
