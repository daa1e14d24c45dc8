const { execSync } = require('child_process');

function getPager(options) {
  options = options || {};
  const cmd = options.cmd || 'echo';
  return execSync(`${cmd} --version`).toString();
}

module.exports = { getPager };
