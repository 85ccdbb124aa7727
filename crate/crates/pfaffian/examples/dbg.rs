use pfaffian::catalog;
use pfaffian::realfn::{Budget, RealFn1};
use pfaffian::roots::*;
use pfaffian::Rat;
fn rat(n: i64, d: i64) -> Rat { Rat::new(n.into(), d.into()) }
fn main() {
    let f = catalog::poly_fn_1d(&[rat(-1,1), rat(0,1), rat(3,1)], &rat(-2,1), &rat(2,1)); // 3x^2-1
    let budget = Budget::default();
    println!("sweep f': {:?}", sign_sweep(&f, &rat(-2,1), &rat(2,1), 48, &budget));
    let d = f.differentiate().unwrap(); // 6x
    println!("sweep 6x: {:?}", sign_sweep(d.as_ref(), &rat(-2,1), &rat(2,1), 48, &budget));
    let r6 = isolate_roots(d.as_ref(), &rat(-2,1), &rat(2,1), 48, &budget);
    println!("roots 6x: {:?}", r6.as_ref().map(|v| v.len()));
    println!("sign f'(-2)={:?} f'(2)={:?}", sign_at(&f, &rat(-2,1), 48), sign_at(&f, &rat(2,1), 48));
    let rts = isolate_roots(&f, &rat(-2,1), &rat(2,1), 48, &budget);
    match rts { Ok(v) => println!("roots f': {}", v.len()), Err(e) => println!("err: {e}") }
}
