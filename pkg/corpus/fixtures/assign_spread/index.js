function withDefaults(store, opts) {
  const merged = Object.assign({ section: 'main' }, opts);
  const slot = store[merged.section];
  slot[merged.key] = merged.value;
  return store;
}

module.exports = { withDefaults };
