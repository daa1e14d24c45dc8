const { assign } = require('./b');

function handler(req) {
  const state = {};
  return assign(state, req.path, req.key, req.value);
}

module.exports = { handler: handler };
