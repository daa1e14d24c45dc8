const registry = {};

function register(config) {
  const { scope = 'app', entry, value } = config;
  const table = registry[scope];
  table[entry] = value;
  return registry;
}

module.exports = { register: register };
