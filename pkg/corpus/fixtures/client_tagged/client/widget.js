function setOption(widget, name, field, value) {
  const section = widget[name];
  section[field] = value;
  return widget;
}

module.exports = { setOption: setOption };
