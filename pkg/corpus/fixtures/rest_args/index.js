function setter(...triple) {
  const target = triple[0];
  const bucket = target[triple[1]];
  bucket[triple[2]] = arguments[3];
  return target;
}

function run(req) {
  return setter({}, req.key, req.sub, req.value);
}

module.exports = { run: run };
