//! Derivative-free local minimization.

pub struct NelderMeadResult<const N: usize> {
    pub point: [f64; N],
    pub value: f64,
    pub iterations: usize,
}

/// Nelder–Mead with the standard coefficients (reflection 1, expansion 2,
/// contraction ½, shrink ½). The best vertex never gets worse from one
/// iteration to the next, so raising `max_iterations` cannot lower the
/// quality of the result. Stops early once the simplex has collapsed or a
/// vertex reaches −∞.
pub fn nelder_mead<const N: usize>(
    f: impl Fn(&[f64; N]) -> f64,
    start: [f64; N],
    step: [f64; N],
    max_iterations: usize,
) -> NelderMeadResult<N> {
    const X_TOL: f64 = 1e-12;
    const F_TOL: f64 = 1e-15;

    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    simplex.push((start, f(&start)));
    for i in 0..N {
        let mut x = start;
        x[i] += step[i];
        simplex.push((x, f(&x)));
    }
    let order = |s: &mut Vec<([f64; N], f64)>| s.sort_by(|a, b| a.1.total_cmp(&b.1));

    let mut iterations = 0;
    order(&mut simplex);
    while iterations < max_iterations {
        let best = simplex[0].1;
        let worst = simplex[N].1;
        if best == f64::NEG_INFINITY {
            break;
        }
        let spread = (worst - best).abs();
        let size = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if size < X_TOL || (worst.is_finite() && spread <= F_TOL * best.abs().max(1e-300)) {
            break;
        }
        iterations += 1;

        let mut centroid = [0.0; N];
        for (x, _) in &simplex[..N] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / N as f64;
            }
        }
        let along = |t: f64| -> [f64; N] {
            let mut y = [0.0; N];
            for i in 0..N {
                y[i] = centroid[i] + t * (simplex[N].0[i] - centroid[i]);
            }
            y
        };

        let xr = along(-1.0);
        let fr = f(&xr);
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = f(&xe);
            simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[N - 1].1 {
            simplex[N] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[N].1 {
                let x = along(-0.5);
                (x, f(&x))
            } else {
                let x = along(0.5);
                (x, f(&x))
            };
            if fc < simplex[N].1.min(fr) {
                simplex[N] = (xc, fc);
            } else {
                let x0 = simplex[0].0;
                for (x, fx) in simplex.iter_mut().skip(1) {
                    for i in 0..N {
                        x[i] = x0[i] + 0.5 * (x[i] - x0[i]);
                    }
                    *fx = f(x);
                }
            }
        }
        order(&mut simplex);
    }
    NelderMeadResult {
        point: simplex[0].0,
        value: simplex[0].1,
        iterations,
    }
}
