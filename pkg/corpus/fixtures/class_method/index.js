class Store {
  constructor() {
    this.data = {};
  }

  resolve(ns) {
    return this.data[ns];
  }

  set(ns, key, value) {
    const bucket = this.resolve(ns);
    bucket[key] = value;
    return this;
  }
}

function update(req) {
  const store = new Store();
  return store.set(req.ns, req.key, req.value);
}

module.exports = { Store: Store, update: update };
