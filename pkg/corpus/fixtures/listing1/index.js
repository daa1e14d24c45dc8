function entryPoint(arg1, arg2, arg3) {
  const obj = {};
  const p = obj[arg1];
  p[arg2] = arg3;
  return obj;
}

module.exports = { entryPoint };
