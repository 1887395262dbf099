function unique(items) {
  const seen = [];
  for (let item of items) {
    if (!seen.includes(item)) {
      seen.push(item);
    }
  }
  return seen;
}
