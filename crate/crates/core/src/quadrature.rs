//! Globally adaptive Gauss–Kronrod (7/15) quadrature for vector-valued
//! integrands, designed to be nested.
//!
//! An integrand returns its value together with an error estimate of its own
//! (zero for a plain function, the inner estimate for a nested integral). The
//! inner errors are propagated through the Kronrod weights into the outer
//! estimate. Interval selection is deterministic: ties go to the lowest index.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper limit of `|kx| d`.
    pub kx_cutoff: f64,
    pub max_evals: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            kx_cutoff: 40.0,
            max_evals: 200_000_000,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance {
            rel: self.rel_tol,
            abs: self.abs_tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub err_estimate: f64,
    pub n_evals: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    fn bound(&self, value: f64) -> f64 {
        (self.rel * value.abs()).max(self.abs)
    }

    /// Tolerance for an inner integral feeding an outer one over `width`.
    pub fn inner(&self, width: f64) -> Tolerance {
        Tolerance {
            rel: 0.1 * self.rel,
            abs: 0.1 * self.abs / width.max(1.0),
        }
    }
}

/// Shared evaluation budget for a (possibly nested) integration.
#[derive(Debug)]
pub struct Budget {
    used: Cell<usize>,
    limit: usize,
}

impl Budget {
    pub fn new(limit: usize) -> Self {
        Self {
            used: Cell::new(0),
            limit,
        }
    }

    pub fn tick(&self) {
        self.used.set(self.used.get() + 1);
    }

    pub fn used(&self) -> usize {
        self.used.get()
    }

    pub fn exhausted(&self) -> bool {
        self.used.get() >= self.limit
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VecEstimate<const N: usize> {
    pub value: [f64; N],
    pub err: [f64; N],
    pub converged: bool,
}

impl<const N: usize> VecEstimate<N> {
    pub fn zero() -> Self {
        Self {
            value: [0.0; N],
            err: [0.0; N],
            converged: true,
        }
    }

    pub fn component(&self, i: usize, n_evals: usize) -> QuadratureEstimate {
        QuadratureEstimate {
            value: self.value[i],
            err_estimate: self.err[i],
            n_evals,
            converged: self.converged,
        }
    }

    pub fn add(&mut self, other: &Self) {
        for i in 0..N {
            self.value[i] += other.value[i];
            self.err[i] += other.err[i];
        }
        self.converged &= other.converged;
    }
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const MAX_SEGMENTS: usize = 4000;

#[derive(Clone, Copy)]
struct Segment<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    err: [f64; N],
    frozen: bool,
}

fn kronrod<const N: usize, F>(f: &mut F, a: f64, b: f64) -> Segment<N>
where
    F: FnMut(f64) -> ([f64; N], [f64; N]),
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [[0.0; N]; 15];
    let mut inner = [0.0; N];
    let mut add_inner = |e: &[f64; N], w: f64| {
        for i in 0..N {
            inner[i] += w * e[i];
        }
    };
    for j in 0..7 {
        let dx = half * XGK[j];
        let (f1, e1) = f(centre - dx);
        let (f2, e2) = f(centre + dx);
        add_inner(&e1, WGK[j]);
        add_inner(&e2, WGK[j]);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
    }
    let (fc, ec) = f(centre);
    add_inner(&ec, WGK[7]);
    fv[14] = fc;

    let mut value = [0.0; N];
    let mut err = [0.0; N];
    for i in 0..N {
        let mut resk = WGK[7] * fc[i];
        let mut resg = WG[3] * fc[i];
        let mut resabs = (WGK[7] * fc[i]).abs();
        for j in 0..7 {
            let s = fv[2 * j][i] + fv[2 * j + 1][i];
            resk += WGK[j] * s;
            resabs += WGK[j] * (fv[2 * j][i].abs() + fv[2 * j + 1][i].abs());
            if j % 2 == 1 {
                resg += WG[j / 2] * s;
            }
        }
        let mean = 0.5 * resk;
        let mut resasc = WGK[7] * (fc[i] - mean).abs();
        for j in 0..7 {
            resasc += WGK[j] * ((fv[2 * j][i] - mean).abs() + (fv[2 * j + 1][i] - mean).abs());
        }
        let h = half.abs();
        let resabs = resabs * h;
        let resasc = resasc * h;
        let mut e = ((resk - resg) * half).abs();
        if resasc != 0.0 && e != 0.0 {
            e = resasc * (200.0 * e / resasc).powf(1.5).min(1.0);
        }
        if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            e = e.max(50.0 * f64::EPSILON * resabs);
        }
        value[i] = resk * half;
        err[i] = e + inner[i] * h;
    }
    Segment {
        a,
        b,
        value,
        err,
        frozen: false,
    }
}

/// Integrates `f` over the partition given by `points` (sorted, at least two).
pub fn adaptive<const N: usize, F>(
    mut f: F,
    points: &[f64],
    tol: Tolerance,
    budget: &Budget,
) -> VecEstimate<N>
where
    F: FnMut(f64) -> ([f64; N], [f64; N]),
{
    debug_assert!(points.len() >= 2);
    let mut segs: Vec<Segment<N>> = points
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| kronrod(&mut f, w[0], w[1]))
        .collect();
    if segs.is_empty() {
        return VecEstimate::zero();
    }
    let span = points[points.len() - 1] - points[0];
    loop {
        let mut value = [0.0; N];
        let mut err = [0.0; N];
        for s in &segs {
            for i in 0..N {
                value[i] += s.value[i];
                err[i] += s.err[i];
            }
        }
        let bounds: Vec<f64> = value.iter().map(|v| tol.bound(*v)).collect();
        let converged = (0..N).all(|i| err[i] <= bounds[i]);
        if converged || budget.exhausted() || segs.len() >= MAX_SEGMENTS {
            return VecEstimate {
                value,
                err,
                converged,
            };
        }
        let mut worst = None;
        let mut worst_score = 0.0;
        for (idx, s) in segs.iter().enumerate() {
            if s.frozen {
                continue;
            }
            let score = (0..N).map(|i| s.err[i] / bounds[i]).fold(0.0, f64::max);
            if score > worst_score {
                worst_score = score;
                worst = Some(idx);
            }
        }
        let Some(idx) = worst else {
            return VecEstimate {
                value,
                err,
                converged,
            };
        };
        let s = segs[idx];
        let mid = 0.5 * (s.a + s.b);
        if (s.b - s.a) <= 1e-13 * span || mid <= s.a || mid >= s.b {
            segs[idx].frozen = true;
            continue;
        }
        let left = kronrod(&mut f, s.a, mid);
        let right = kronrod(&mut f, mid, s.b);
        segs[idx] = left;
        segs.insert(idx + 1, right);
    }
}

/// Scalar convenience wrapper around [`adaptive`].
pub fn integrate<F>(
    mut f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
    max_evals: usize,
) -> QuadratureEstimate
where
    F: FnMut(f64) -> f64,
{
    let budget = Budget::new(max_evals);
    let est = adaptive(
        |x| {
            budget.tick();
            ([f(x)], [0.0])
        },
        &[a, b],
        tol,
        &budget,
    );
    est.component(0, budget.used())
}

/// Maps `s in [0, 1]` to `t = (1 - cos(pi s)) / 2` and returns `(t, dt/ds)`.
/// Square-root behaviour at either end of `t` becomes smooth in `s`.
pub fn cosine_map(s: f64) -> (f64, f64) {
    let (sin, cos) = (std::f64::consts::PI * s).sin_cos();
    (0.5 * (1.0 - cos), 0.5 * std::f64::consts::PI * sin)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol(rel: f64) -> Tolerance {
        Tolerance { rel, abs: 1e-15 }
    }

    #[test]
    fn rules_are_exact_for_polynomials() {
        let wk: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let wg: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((wk - 2.0).abs() < 1e-15);
        assert!((wg - 2.0).abs() < 1e-15);
        for deg in 0..=22 {
            let exact = if deg % 2 == 1 {
                0.0
            } else {
                2.0 / (deg as f64 + 1.0)
            };
            let seg: Segment<1> = kronrod(&mut |x: f64| ([x.powi(deg)], [0.0]), -1.0, 1.0);
            assert!((seg.value[0] - exact).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn gauss_part_is_exact_to_degree_13() {
        for deg in 0..=13 {
            let exact = if deg % 2 == 1 {
                0.0
            } else {
                2.0 / (deg as f64 + 1.0)
            };
            let mut g = WG[3] * 0f64.powi(deg);
            for j in 0..3 {
                let x = XGK[2 * j + 1];
                g += WG[j] * (x.powi(deg) + (-x).powi(deg));
            }
            assert!((g - exact).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn handles_peaked_integrand() {
        let e = integrate(|x| 1e-3 / (x * x + 1e-6), -1.0, 1.0, tol(1e-10), 1_000_000);
        let exact = 2.0 * (1e3f64).atan();
        assert!(e.converged);
        assert!((e.value - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn nested_gaussian() {
        let budget = Budget::new(10_000_000);
        let outer = tol(1e-10);
        let est = adaptive(
            |x| {
                let inner = adaptive(
                    |y| {
                        budget.tick();
                        ([(-(x * x + y * y)).exp()], [0.0])
                    },
                    &[-6.0, 6.0],
                    outer.inner(12.0),
                    &budget,
                );
                (inner.value, inner.err)
            },
            &[-6.0, 0.0, 6.0],
            outer,
            &budget,
        );
        assert!(est.converged);
        assert!((est.value[0] - std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let e = integrate(|x| (1.0 / x).sin(), 1e-6, 1.0, tol(1e-14), 200);
        assert!(!e.converged);
    }

    #[test]
    fn cosine_map_removes_sqrt_endpoints() {
        let e = integrate(
            |s| {
                let (t, dt) = cosine_map(s);
                (t * (1.0 - t)).sqrt() * dt
            },
            0.0,
            1.0,
            tol(1e-13),
            100_000,
        );
        assert!((e.value - std::f64::consts::PI / 8.0).abs() < 1e-13);
    }
}
