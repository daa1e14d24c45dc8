function diffApply(obj, diff) {
  const path = diff.path;
  const lastProp = path[path.length - 1];
  let thisProp;
  while ((thisProp = path.shift()) && path.length) {
    obj = obj[thisProp];
  }
  obj[lastProp] = diff.value;
  return obj;
}

module.exports = { diffApply };
