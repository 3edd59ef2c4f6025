//! Golden-section search for unimodal scalar minimization.

#[derive(Debug, Clone, Copy)]
pub struct Minimum {
    pub x: f64,
    pub fx: f64,
    pub evaluations: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Minimizes `f` on `[a, b]`, stopping when the bracket is narrower than `tol`.
pub fn golden_section<F>(mut f: F, a: f64, b: f64, tol: f64) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evaluations = 2;
    while (b - a) > tol && evaluations < 10_000 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        evaluations += 1;
        if x1 >= x2 {
            break;
        }
    }
    if f1 <= f2 {
        Minimum { x: x1, fx: f1, evaluations }
    } else {
        Minimum { x: x2, fx: f2, evaluations }
    }
}
