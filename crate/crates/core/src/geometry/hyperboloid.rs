//! Hyperboloid model `{x : -x0² + x1² + ... = -1, x0 > 0}` of Hⁿ, `D = n + 1`.

pub type Vector<const D: usize> = [f64; D];

pub fn mink<const D: usize>(a: &Vector<D>, b: &Vector<D>) -> f64 {
    let mut s = -a[0] * b[0];
    for i in 1..D {
        s += a[i] * b[i];
    }
    s
}

pub fn origin<const D: usize>() -> Vector<D> {
    let mut o = [0.0; D];
    o[0] = 1.0;
    o
}

pub fn add<const D: usize>(a: &Vector<D>, ca: f64, b: &Vector<D>, cb: f64) -> Vector<D> {
    let mut out = [0.0; D];
    for i in 0..D {
        out[i] = ca * a[i] + cb * b[i];
    }
    out
}

/// Geodesic distance, stable for nearby points.
pub fn distance<const D: usize>(a: &Vector<D>, b: &Vector<D>) -> f64 {
    let diff = add(a, 1.0, b, -1.0);
    let chord = mink(&diff, &diff).max(0.0).sqrt();
    2.0 * (0.5 * chord).asinh()
}

/// Image of the tangent basis vector `e_i` (`i ≥ 1`) at the origin under the
/// pure boost taking the origin to `x`.
pub fn boost_basis<const D: usize>(x: &Vector<D>, i: usize) -> Vector<D> {
    let mut v = [0.0; D];
    v[0] = x[i];
    for j in 1..D {
        v[j] = x[i] * x[j] / (1.0 + x[0]);
    }
    v[i] += 1.0;
    v
}

/// Pure boost taking the origin to `x`, applied to `y`.
pub fn boost_apply<const D: usize>(x: &Vector<D>, y: &Vector<D>) -> Vector<D> {
    let mut out = add(x, y[0], &[0.0; D], 0.0);
    for i in 1..D {
        let col = boost_basis(x, i);
        out = add(&out, 1.0, &col, y[i]);
    }
    out
}

/// Inverse of [`boost_apply`].
pub fn boost_inverse<const D: usize>(x: &Vector<D>, y: &Vector<D>) -> Vector<D> {
    let mut xi = *x;
    for v in xi.iter_mut().skip(1) {
        *v = -*v;
    }
    boost_apply(&xi, y)
}

/// `exp_x(s·v)` for a unit tangent `v` at `x`.
pub fn exp_map<const D: usize>(x: &Vector<D>, v: &Vector<D>, s: f64) -> Vector<D> {
    add(x, s.cosh(), v, s.sinh())
}

/// Point at distance `r` from the origin in the direction of the Euclidean
/// unit vector `dir` (length `D - 1`).
pub fn from_polar<const D: usize>(r: f64, dir: &[f64]) -> Vector<D> {
    let mut x = [0.0; D];
    x[0] = r.cosh();
    let sh = r.sinh();
    for i in 1..D {
        x[i] = sh * dir[i - 1];
    }
    x
}

/// Distance from the origin.
pub fn radius<const D: usize>(x: &Vector<D>) -> f64 {
    let s: f64 = x[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
    s.asinh()
}

/// Unit-speed geodesic `s ↦ cosh s·base + sinh s·tangent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HGeodesic<const D: usize> {
    pub base: Vector<D>,
    pub tangent: Vector<D>,
}

impl<const D: usize> HGeodesic<D> {
    pub fn point(&self, s: f64) -> Vector<D> {
        exp_map(&self.base, &self.tangent, s)
    }

    /// Parameter of the closest point to `c` and `cosh` of the distance.
    pub fn closest_approach(&self, c: &Vector<D>) -> (f64, f64) {
        let a = -mink(c, &self.base);
        let b = -mink(c, &self.tangent);
        let s_star = (-b / a).atanh();
        let cosh_d = (a * a - b * b).max(1.0).sqrt();
        (s_star, cosh_d)
    }

    /// Parameter interval inside the closed ball `B(c, r)`, if any.
    pub fn ball_interval(&self, c: &Vector<D>, r: f64) -> Option<(f64, f64)> {
        let (s_star, cosh_d) = self.closest_approach(c);
        let ratio = r.cosh() / cosh_d;
        if ratio < 1.0 {
            return None;
        }
        let half = ratio.acosh();
        Some((s_star - half, s_star + half))
    }

    pub fn reversed(&self) -> Self {
        Self {
            base: self.base,
            tangent: add(&self.tangent, -1.0, &[0.0; D], 0.0),
        }
    }
}
