function makeRecord(value) {
  const record = {};
  record.value = value;
  record.createdAt = Date.now();
  return record;
}

function describe(record) {
  return record.value + ' @ ' + record.createdAt;
}

module.exports = { makeRecord, describe };
