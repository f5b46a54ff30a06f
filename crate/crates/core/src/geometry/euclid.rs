use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclidPoint<const N: usize> {
    pub coords: [f64; N],
}

pub fn dot<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm<const N: usize>(a: &[f64; N]) -> f64 {
    dot(a, a).sqrt()
}

pub fn axpy<const N: usize>(a: &[f64; N], c: f64, b: &[f64; N]) -> [f64; N] {
    let mut out = *a;
    for i in 0..N {
        out[i] += c * b[i];
    }
    out
}

impl<const N: usize> EuclidPoint<N> {
    pub fn new(coords: [f64; N]) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Validation("non-finite coordinate".into()));
        }
        Ok(Self { coords })
    }

    pub fn origin() -> Self {
        Self { coords: [0.0; N] }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        let mut s = 0.0;
        for i in 0..N {
            s += (self.coords[i] - other.coords[i]).powi(2);
        }
        s.sqrt()
    }

    pub fn translated(&self, v: &[f64; N]) -> Self {
        Self {
            coords: axpy(&self.coords, 1.0, v),
        }
    }
}

/// Affine `d`-plane `base + span(frame)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DPlane<const N: usize> {
    pub base: EuclidPoint<N>,
    pub frame: Vec<[f64; N]>,
}

const ORTHO_TOL: f64 = 1e-12;

fn check_orthonormal<const N: usize>(vs: &[[f64; N]]) -> Result<()> {
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate().take(i + 1) {
            let want = if i == j { 1.0 } else { 0.0 };
            if (dot(a, b) - want).abs() > ORTHO_TOL {
                return Err(Error::Validation(format!(
                    "vectors {j} and {i} are not orthonormal (dot = {})",
                    dot(a, b)
                )));
            }
        }
    }
    Ok(())
}

impl<const N: usize> DPlane<N> {
    pub fn new(base: EuclidPoint<N>, frame: Vec<[f64; N]>) -> Result<Self> {
        if frame.is_empty() || frame.len() >= N {
            return Err(Error::Validation(format!(
                "plane dimension {} must lie in 1..{N}",
                frame.len()
            )));
        }
        check_orthonormal(&frame)?;
        Ok(Self { base, frame })
    }

    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    /// Point `base + Σ params[i]·frame[i]`.
    pub fn point(&self, params: &[f64]) -> EuclidPoint<N> {
        let mut x = self.base.coords;
        for (v, &s) in self.frame.iter().zip(params) {
            x = axpy(&x, s, v);
        }
        EuclidPoint { coords: x }
    }

    /// Orthogonal projection of `x` onto the plane.
    pub fn project(&self, x: &EuclidPoint<N>) -> EuclidPoint<N> {
        let rel = axpy(&x.coords, -1.0, &self.base.coords);
        let params: Vec<f64> = self.frame.iter().map(|v| dot(&rel, v)).collect();
        self.point(&params)
    }

    pub fn distance_to(&self, x: &EuclidPoint<N>) -> f64 {
        self.project(x).distance(x)
    }
}

/// The plane through `x + p·u` spanned by `frame`; it lies at distance `p`
/// from `x`.
pub fn plane_at_distance<const N: usize>(
    x: &EuclidPoint<N>,
    frame: &[[f64; N]],
    u: &[f64; N],
    p: f64,
) -> Result<DPlane<N>> {
    let mut all = frame.to_vec();
    all.push(*u);
    check_orthonormal(&all)?;
    DPlane::new(
        EuclidPoint {
            coords: axpy(&x.coords, p, u),
        },
        frame.to_vec(),
    )
}

/// Orthonormal pair spanning the plane orthogonal to the unit vector `n`.
pub fn orthonormal_complement(n: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let helper = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let proj = axpy(&helper, -dot(&helper, n), n);
    let e1 = {
        let l = norm(&proj);
        [proj[0] / l, proj[1] / l, proj[2] / l]
    };
    let e2 = [
        n[1] * e1[2] - n[2] * e1[1],
        n[2] * e1[0] - n[0] * e1[2],
        n[0] * e1[1] - n[1] * e1[0],
    ];
    (e1, e2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_line() {
        let l = plane_at_distance(&EuclidPoint::origin(), &[[0.0, 1.0]], &[1.0, 0.0], 2.0).unwrap();
        assert_eq!(l.point(&[3.0]).coords, [2.0, 3.0]);
        assert!((l.distance_to(&EuclidPoint::origin()) - 2.0).abs() < 1e-15);
        let l0 = plane_at_distance(&EuclidPoint::origin(), &[[0.0, 1.0]], &[1.0, 0.0], 0.0).unwrap();
        assert!(l0.distance_to(&EuclidPoint::origin()) < 1e-15);
    }

    #[test]
    fn rejects_non_orthonormal() {
        assert!(plane_at_distance(&EuclidPoint::<2>::origin(), &[[0.0, 1.0]], &[0.6, 0.6], 1.0).is_err());
        assert!(DPlane::new(EuclidPoint::<3>::origin(), vec![[1.0, 0.0, 0.0], [1.0, 0.0, 0.0]]).is_err());
    }

    #[test]
    fn complement_is_orthonormal() {
        let n = [0.48, -0.6, 0.64];
        let (a, b) = orthonormal_complement(&n);
        check_orthonormal(&[n, a, b]).unwrap();
    }
}
