function seal(o) {
  o.__proto__.locked = true;
  return o;
}

function harden(o) {
  o.constructor.prototype.frozen = true;
  return o;
}

module.exports = { seal: seal, harden: harden };
