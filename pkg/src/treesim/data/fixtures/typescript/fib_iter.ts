function fib(n: number): number {
  let a: number = 0;
  let b: number = 1;
  for (let i = 0; i < n; i++) {
    const next: number = a + b;
    a = b;
    b = next;
  }
  return a;
}
