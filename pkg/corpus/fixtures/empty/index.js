const VERSION = '1.0.0';

function banner() {
  return 'tool ' + VERSION;
}

module.exports = { banner: banner };
