//! Verification pipelines: each runs one family of checks at desk scale and
//! returns report rows. `calibrate` freezes the constants the others read.

use std::f64::consts::PI;

use log::info;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::abel::{self, RadialField};
use crate::config::{Constants, QuadratureSpec};
use crate::error::{Error, Result};
use crate::euclid_radon::{self, DirectionRule};
use crate::geometry::disk::{Horocycle, HypPoint};
use crate::geometry::euclid::EuclidPoint;
use crate::geometry::phantom::{PhantomKind, PhantomSpec, RadialProfile};
use crate::geometry::product::ProductPoint;
use crate::geometry::space3::H3Point;
use crate::hfourier;
use crate::horocycle::{self, HorocycleSinogram};
use crate::hyp_radon;
use crate::numerics::cfunc::CFunctionOracle;
use crate::numerics::diff::d_dp;
use crate::numerics::gauss::composite;
use crate::numerics::quad::integrate_circle;
use crate::numerics::spectral::TGrid;
use crate::report::{Criterion, Report, ReportRow};
use crate::xray_product;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EuclidParams {
    pub probes: usize,
    pub plane_probes: usize,
    /// Probes are drawn in the ball of this radius about the phantom center.
    pub probe_radius: f64,
    pub line_rule_2d: DirectionRule,
    pub line_rule_3d: DirectionRule,
    pub plane_rule: DirectionRule,
}

impl Default for EuclidParams {
    fn default() -> Self {
        Self {
            probes: 25,
            plane_probes: 10,
            probe_radius: 1.5,
            line_rule_2d: DirectionRule::lines_2d(),
            line_rule_3d: DirectionRule::lines_3d(),
            plane_rule: DirectionRule::planes_3d(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HypParams {
    pub h2_probes: usize,
    pub h3_probes: usize,
    pub plane_probes: usize,
    pub probe_radius: f64,
    pub h2_angles: usize,
    pub h3_line_rule: DirectionRule,
    pub h3_line_gauss_order: usize,
    pub h3_plane_rule: DirectionRule,
}

impl Default for HypParams {
    fn default() -> Self {
        Self {
            h2_probes: 20,
            h3_probes: 20,
            plane_probes: 8,
            probe_radius: 1.5,
            h2_angles: 64,
            h3_line_rule: DirectionRule {
                circle: 8,
                polar: 6,
                azimuth: 12,
            },
            h3_line_gauss_order: 16,
            h3_plane_rule: DirectionRule::planes_3d(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProductParams {
    /// Trapezoid points per angle of the geodesic family at distance `p`.
    pub angles: usize,
}

impl Default for ProductParams {
    fn default() -> Self {
        Self { angles: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HorocycleParams {
    pub thetas: usize,
    pub roundtrip_points: usize,
    pub roundtrip_radius: f64,
    pub n_max: i64,
    pub support_radius: f64,
    pub support_delta: f64,
    pub support_thetas: usize,
    pub support_probes: usize,
}

impl Default for HorocycleParams {
    fn default() -> Self {
        Self {
            thetas: 64,
            roundtrip_points: 10,
            roundtrip_radius: 2.0,
            n_max: 3,
            support_radius: 1.0,
            support_delta: 0.2,
            support_thetas: 256,
            support_probes: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AbelParams {
    pub window_lambda: f64,
    pub window_inner: f64,
    pub window_outer: f64,
    pub probe_radii: Vec<f64>,
}

impl Default for AbelParams {
    fn default() -> Self {
        Self {
            window_lambda: 2.5,
            window_inner: 4.0,
            window_outer: 8.0,
            probe_radii: vec![0.0, 0.5, 1.0, 1.5, 2.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FourierParams {
    pub lambda_max: f64,
    pub dlambda: f64,
    pub thetas: usize,
    pub inversion_points: usize,
    pub inversion_radius: f64,
}

impl Default for FourierParams {
    fn default() -> Self {
        Self {
            lambda_max: 8.0,
            dlambda: 1.0 / 16.0,
            thetas: 64,
            inversion_points: 20,
            inversion_radius: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RlParams {
    pub xis: Vec<f64>,
    pub etas: Vec<f64>,
    pub thetas: usize,
}

impl Default for RlParams {
    fn default() -> Self {
        Self {
            xis: vec![1.0, 5.0, 10.0, 20.0, 40.0],
            etas: vec![-0.5, -0.25, 0.0, 0.25, 0.5],
            thetas: 8,
        }
    }
}

/// Parameters for every pipeline; each section defaults independently.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteParams {
    pub euclid: EuclidParams,
    pub hyp: HypParams,
    pub product: ProductParams,
    pub horocycle: HorocycleParams,
    pub abel: AbelParams,
    pub fourier: FourierParams,
    pub rl: RlParams,
}

/// Everything a pipeline reads. `phantom`, when set, replaces the default
/// disk phantom of the H², horocycle, support, and Fourier pipelines.
#[derive(Debug, Clone)]
pub struct SuiteContext {
    pub spec: QuadratureSpec,
    pub params: SuiteParams,
    pub seed: u64,
    pub phantom: Option<PhantomSpec>,
    pub constants: Option<Constants>,
}

impl SuiteContext {
    pub fn new(spec: QuadratureSpec) -> Self {
        Self {
            spec,
            params: SuiteParams::default(),
            seed: 0,
            phantom: None,
            constants: None,
        }
    }

    fn constants(&self) -> Result<&Constants> {
        self.constants
            .as_ref()
            .ok_or(Error::NotCalibrated("constants file"))
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn disk_phantom(&self) -> PhantomSpec {
        self.phantom
            .clone()
            .unwrap_or_else(|| PhantomSpec::gaussian(1.0, 1.0).at(&[0.3, -0.2]))
    }

    fn grid(&self) -> Result<TGrid> {
        TGrid::new(self.spec.grid_t, self.spec.grid_n)
    }
}

/// `1/(2π²)`, the normalization that makes both Plancherel identities
/// isometries; `calibrate` measures it.
pub const KAPPA_NOMINAL: f64 = 1.0 / (2.0 * PI * PI);

/// Uniform points in the Euclidean ball of radius `r` about `center`.
fn ball_probes<const N: usize>(rng: &mut ChaCha8Rng, center: &[f64; N], r: f64, count: usize) -> Vec<EuclidPoint<N>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: [f64; N] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            let coords = std::array::from_fn(|i| center[i] + r * v[i]);
            out.push(EuclidPoint { coords });
        }
    }
    out
}

fn unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.map(|x| x / n);
        }
    }
}

/// Points at hyperbolic distance `≤ r` from the origin.
fn disk_probes(rng: &mut ChaCha8Rng, r: f64, count: usize) -> Vec<HypPoint> {
    (0..count)
        .map(|_| HypPoint::from_polar(r * rng.gen::<f64>(), 2.0 * PI * rng.gen::<f64>()))
        .collect()
}

fn max_abs_error<P>(probes: &[P], mut rec: impl FnMut(&P) -> Result<f64>, truth: impl Fn(&P) -> f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in probes {
        worst = worst.max((rec(p)? - truth(p)).abs());
    }
    Ok(worst)
}

/// X-ray inversion on ℝ² and ℝ³ and 2-plane inversion on ℝ³.
pub fn euclid_invert(ctx: &SuiteContext) -> Result<Report> {
    let p = &ctx.params.euclid;
    let spec = ctx.spec;
    let mut rep = Report::new();
    rep.timed(|| {
        let c = [0.3, -0.2];
        let f = PhantomSpec::gaussian(1.0, 1.0).at(&c).euclid::<2>()?;
        let phi = euclid_radon::sinogram(&f, &spec);
        let probes = ball_probes(&mut ctx.rng(1), &c, p.probe_radius, p.probes);
        let err = max_abs_error(
            &probes,
            |x| Ok(euclid_radon::invert_xray(&phi, x, &spec, &p.line_rule_2d)?.value),
            |x| f.eval(x),
        )?;
        Ok(vec![ReportRow::residual("euclid.r2.xray", "Euclidean X-ray inversion, n=2", err, 1e-3)])
    })?;
    rep.timed(|| {
        let c = [0.3, -0.2, 0.1];
        let f = PhantomSpec::gaussian(1.0, 1.0).at(&c).euclid::<3>()?;
        let phi = euclid_radon::sinogram(&f, &spec);
        let probes = ball_probes(&mut ctx.rng(2), &c, p.probe_radius, p.probes);
        let err = max_abs_error(
            &probes,
            |x| Ok(euclid_radon::invert_xray(&phi, x, &spec, &p.line_rule_3d)?.value),
            |x| f.eval(x),
        )?;
        Ok(vec![ReportRow::residual("euclid.r3.xray", "Euclidean X-ray inversion, n=3", err, 1e-3)])
    })?;
    let c2 = ctx.constants()?.c_d_3_2;
    rep.timed(|| {
        let c = [0.2, 0.1, -0.3];
        let f = PhantomSpec::gaussian(1.0, 1.0).at(&c).euclid::<3>()?;
        let phi = euclid_radon::sinogram(&f, &spec);
        let probes = ball_probes(&mut ctx.rng(3), &c, p.probe_radius, p.plane_probes);
        let err = max_abs_error(
            &probes,
            |x| Ok(euclid_radon::invert_dplane(&phi, x, &spec, &p.plane_rule, Some(c2))?.value),
            |x| f.eval(x),
        )?;
        Ok(vec![ReportRow::residual("euclid.r3.planes", "d-plane inversion, (n,d)=(3,2)", err, 5e-3)])
    })?;
    rep.timed(|| {
        let f = PhantomSpec::gaussian(1.0, 0.8).at(&[0.2, -0.4]).euclid::<2>()?;
        let phi = |w: &[f64; 2], s: f64| (-(s - 0.3 * w[0]).powi(2)).exp() * (1.0 + 0.2 * w[1]);
        let (lhs, rhs) = euclid_radon::duality_check(&f, phi, &spec, &DirectionRule::lines_2d())?;
        Ok(vec![ReportRow::relative("euclid.r2.duality", "Euclidean duality of f-hat and phi-check", rhs, lhs, 1e-8)])
    })?;
    Ok(rep)
}

/// Geodesic inversion on H² and H³ and plane inversion on H³.
pub fn hyp_invert(ctx: &SuiteContext) -> Result<Report> {
    let p = &ctx.params.hyp;
    let spec = ctx.spec;
    let mut rep = Report::new();
    rep.timed(|| {
        let f = ctx.disk_phantom().disk()?;
        let phi = hyp_radon::sinogram_h2(&f, &spec);
        let probes = disk_probes(&mut ctx.rng(11), p.probe_radius, p.h2_probes);
        let err = max_abs_error(
            &probes,
            |x| Ok(hyp_radon::invert_hyp_xray(&phi, x, &spec, p.h2_angles)?.value),
            |x| f.eval(x),
        )?;
        Ok(vec![ReportRow::residual("hyp.h2.xray", "hyperbolic X-ray inversion, H2", err, 5e-3)])
    })?;
    rep.timed(|| {
        let line_spec = QuadratureSpec {
            gauss_order: p.h3_line_gauss_order,
            ..spec
        };
        let f = PhantomSpec::gaussian(1.0, 1.0).at(&[0.1, -0.1, 0.05]).h3()?;
        let phi = hyp_radon::sinogram_h3_lines(&f, &line_spec);
        let mut rng = ctx.rng(12);
        let probes: Vec<H3Point> = (0..p.h3_probes)
            .map(|_| H3Point::from_polar(p.probe_radius * rng.gen::<f64>(), unit_vector(&mut rng)))
            .collect();
        let err = max_abs_error(
            &probes,
            |x| Ok(hyp_radon::invert_h3_xray(&phi, x, &line_spec, &p.h3_line_rule)?.value),
            |x| f.eval(x),
        )?;
        Ok(vec![ReportRow::residual("hyp.h3.xray", "hyperbolic X-ray inversion, H3", err, 5e-3)])
    })?;
    let big_c2 = ctx.constants()?.big_c_d_3_2;
    rep.timed(|| {
        let f = PhantomSpec::gaussian(1.0, 1.0).at(&[-0.1, 0.05, 0.1]).h3()?;
        let phi = hyp_radon::sinogram_h3_planes(&f, &spec);
        let mut rng = ctx.rng(13);
        let probes: Vec<H3Point> = (0..p.plane_probes)
            .map(|_| H3Point::from_polar(p.probe_radius * rng.gen::<f64>(), unit_vector(&mut rng)))
            .collect();
        let err = max_abs_error(
            &probes,
            |x| Ok(hyp_radon::invert_hyp_tg(&phi, x, &spec, &p.h3_plane_rule, Some(big_c2))?.value),
            |x| f.eval(x),
        )?;
        Ok(vec![ReportRow::residual("hyp.h3.planes", "totally geodesic plane inversion, H3", err, 1e-2)])
    })?;
    Ok(rep)
}

/// `f(o)` on H²×H² for a separable Gaussian, a bump, and a translated bump.
pub fn product_invert(ctx: &SuiteContext) -> Result<Report> {
    let m = ctx.params.product.angles;
    let spec = ctx.spec;
    let mut rep = Report::new();
    let mut sep = PhantomSpec::gaussian(1.0, 1.0);
    sep.kind = PhantomKind::SeparableProduct;
    sep.secondary_width = Some(0.8);
    let cases = [
        ("product.separable_gaussian", sep, None),
        ("product.compact_bump", PhantomSpec::bump(1.0, 1.5), None),
        (
            "product.translated_bump",
            PhantomSpec::bump(1.0, 1.5).at(&[0.2, 0.1, -0.1, 0.3]),
            Some([0.25, 0.05, -0.05, 0.2]),
        ),
    ];
    for (id, ph, at) in cases {
        rep.timed(|| {
            let f = ph.product()?;
            let (field, x) = match at {
                Some(c) => {
                    let x = ProductPoint {
                        z1: HypPoint::new(Complex64::new(c[0], c[1]))?,
                        z2: HypPoint::new(Complex64::new(c[2], c[3]))?,
                    };
                    (xray_product::recentered(&f, &x), x)
                }
                None => (f.clone(), ProductPoint::origin()),
            };
            let rec = xray_product::invert_product_xray(&xray_product::sinogram(&field, &spec), &spec, m)?;
            Ok(vec![ReportRow::relative(id, "rank-two X-ray inversion on H2xH2", rec.value, f.eval(&x), 1e-2)])
        })?;
    }
    Ok(rep)
}

fn plancherel_phantoms() -> Vec<PhantomSpec> {
    vec![
        PhantomSpec::gaussian(1.0, 1.0),
        PhantomSpec::gaussian(1.0, 1.0).at(&[0.3, -0.2]),
        PhantomSpec::gaussian(0.7, 0.8).at(&[-0.1, 0.4]),
        PhantomSpec::bump(1.0, 1.5).at(&[0.2, 0.1]),
        PhantomSpec::bump(2.0, 1.0).at(&[-0.3, 0.0]),
    ]
}

/// Duality, the Λ round trip, and the horocycle Plancherel formula.
pub fn horocycle_roundtrip(ctx: &SuiteContext) -> Result<Report> {
    let p = &ctx.params.horocycle;
    let spec = ctx.spec;
    let k = ctx.constants()?;
    let (kappa, mu) = (k.kappa, k.horocycle_mu_exponent);
    let grid = ctx.grid()?;
    let mut rep = Report::new();
    let f = ctx.disk_phantom().disk()?;
    rep.timed(|| {
        let phi = |t: f64, th: f64| (-t * t).exp() * (1.0 + 0.3 * th.cos());
        let table = horocycle::duality_table(&f, phi, &[mu], &spec)?;
        let rhs = table.rhs[0].1;
        Ok(vec![ReportRow::relative("horocycle.duality", "horocycle duality", rhs, table.lhs, 1e-6)])
    })?;
    rep.timed(|| {
        let psi = HorocycleSinogram::from_field(&f, grid, p.thetas, &spec)?;
        let inv = horocycle::LambdaInverse::new(&psi, kappa)?;
        let probes = disk_probes(&mut ctx.rng(21), p.roundtrip_radius, p.roundtrip_points);
        let err = max_abs_error(&probes, |z| Ok(inv.eval(z)), |z| f.eval(z))?;
        Ok(vec![ReportRow::residual("horocycle.lambda_roundtrip", "horocycle inversion via Lambda", err, 1e-2)])
    })?;
    rep.timed(|| {
        let mut ratios = Vec::new();
        for ph in plancherel_phantoms() {
            let g = ph.disk()?;
            let psi = HorocycleSinogram::from_field(&g, grid, p.thetas, &spec)?;
            let t = horocycle::plancherel_horocycle(&g, &psi, kappa, mu)?;
            ratios.push(t.ratio.ok_or_else(|| Error::Validation("zero phantom in Plancherel set".into()))?);
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let spread = ratios.iter().map(|r| (r - mean).abs()).fold(0.0, f64::max) / mean;
        Ok(vec![
            ReportRow::residual("horocycle.plancherel.spread", "horocycle Plancherel, phantom independence", spread, 1e-3),
            ReportRow::relative("horocycle.plancherel.ratio", "horocycle Plancherel, shared kappa", mean, 1.0, 1e-3),
        ])
    })?;
    Ok(rep)
}

/// The range law `Ψ'_n = S_n * Ψ_n` with its negative control.
pub fn horocycle_range(ctx: &SuiteContext) -> Result<Report> {
    let p = &ctx.params.horocycle;
    let k = ctx.constants()?;
    let (k0, mu) = (k.range_kappa0, k.range_mu);
    let grid = ctx.grid()?;
    let mut rep = Report::new();
    let f = ctx.disk_phantom().disk()?;
    let psi = HorocycleSinogram::from_field(&f, grid, p.thetas, &ctx.spec)?;
    let coeffs = horocycle::range_coefficients(&psi);
    rep.timed(|| {
        let mut rows = vec![ReportRow::residual(
            "range.fourier_series",
            "angular series of the horocycle transform",
            coeffs.reconstruction_residual(&psi),
            1e-10,
        )];
        let mut modulus = 0.0f64;
        for n in 1..=p.n_max {
            let check = horocycle::range_multiplier_check(&coeffs, n, k0, mu);
            let control = horocycle::range_multiplier_check(&horocycle::perturb_even(&coeffs, n, ctx.seed ^ n as u64), n, k0, mu);
            let mut row = ReportRow::residual(format!("range.n{n}"), "range law, multiplier S_n", check.residual, 1e-2);
            if check.inconclusive {
                row.pass = false;
            }
            rows.push(row);
            rows.push(ReportRow::residual(
                format!("range.control.n{n}"),
                "range law, perturbed psi_n (residual ratio)",
                check.residual / control.residual,
                0.1,
            ));
            for m in 0..grid.n {
                modulus = modulus.max((horocycle::s_hat(n, grid.lambda(m)).norm() - 1.0).abs());
            }
        }
        rows.push(ReportRow::residual("range.s_hat_modulus", "unimodularity of S_n-hat", modulus, 1e-12));
        Ok(rows)
    })?;
    Ok(rep)
}

/// Support theorem on the disk, with an off-center negative control.
pub fn support_scan(ctx: &SuiteContext) -> Result<Report> {
    let p = &ctx.params.horocycle;
    let kappa = ctx.constants()?.kappa;
    let grid = ctx.grid()?;
    let (r, delta) = (p.support_radius, p.support_delta);
    let mut rng = ctx.rng(31);
    let probes: Vec<HypPoint> = (0..p.support_probes)
        .map(|_| HypPoint::from_polar(r + delta + 0.1 + rng.gen::<f64>(), 2.0 * PI * rng.gen::<f64>()))
        .collect();
    let mut rep = Report::new();
    let phantom = ctx.phantom.clone().unwrap_or_else(|| PhantomSpec::bump(1.0, 1.0));
    rep.timed(|| {
        let f = phantom.disk()?;
        let psi = HorocycleSinogram::from_field(&f, grid, p.support_thetas, &ctx.spec)?;
        let s = horocycle::support_scan(&psi, r, delta, kappa, &probes, 1e-8, 1e-3)?;
        Ok(vec![
            ReportRow::residual("support.external", "support theorem, horocycles outside the ball", s.external_sup, 1e-8),
            ReportRow::residual("support.enclosing", "support theorem, horocycles enclosing the ball", s.enclosing_sup, 1e-8),
            ReportRow::residual("support.outside", "support theorem, reconstruction outside the ball", s.outside_sup, 1e-3),
            ReportRow::residual(
                "support.consistency",
                "equivalent support conditions agree",
                if s.consistent() { 0.0 } else { 1.0 },
                0.0,
            ),
        ])
    })?;
    rep.timed(|| {
        let f = PhantomSpec::bump(1.0, 1.0).at(&[0.45, 0.0]).disk()?;
        let psi = HorocycleSinogram::from_field(&f, grid, 64, &ctx.spec)?;
        let s = horocycle::support_scan(&psi, r, delta, kappa, &[], 1e-8, 1e-3)?;
        Ok(vec![ReportRow::new(
            "support.negative_control",
            "support theorem, off-center phantom (expected fail)",
            s.external_sup,
            0.0,
            1e-8,
            Criterion::ExpectedFail,
        )])
    })?;
    Ok(rep)
}

/// Abel transform identities on radial functions.
pub fn abel_identities(ctx: &SuiteContext) -> Result<Report> {
    let p = &ctx.params.abel;
    let spec = ctx.spec;
    let kappa = ctx.constants()?.kappa;
    let grid = ctx.grid()?;
    let gauss = RadialProfile::Gaussian {
        amplitude: 1.0,
        width: 1.0,
    };
    let f0 = RadialField::from_profile(gauss);
    let f2 = RadialField::from_profile(RadialProfile::Bump {
        amplitude: 1.0,
        radius: 1.5,
    });
    let mut rep = Report::new();
    rep.timed(|| {
        let field = f0.to_field();
        let mut worst = 0.0f64;
        for t in [-2.0, -0.5, 0.0, 0.7, 1.9] {
            let a = abel::abel_forward(&f0, t, &spec)?;
            let h = horocycle::horocycle_forward(&field, &Horocycle::new(t, 0.0), &spec)?;
            worst = worst.max((a - (0.5 * t).exp() * h).abs());
        }
        Ok(vec![ReportRow::residual("abel.horocycle_form", "Abel transform as weighted horocycle integral", worst, 1e-10)])
    })?;
    rep.timed(|| {
        let r = abel::intertwining_residual(&f0, grid, &abel::lambda_grid(), &spec)?;
        Ok(vec![ReportRow::residual("abel.intertwining", "Abel transform intertwines spherical and Euclidean transforms", r, 1e-4)])
    })?;
    rep.timed(|| {
        let r = abel::abel_convolution_residual(&f0, &f2, grid, &spec)?;
        Ok(vec![ReportRow::residual("abel.convolution", "Abel transform of a radial convolution", r, 1e-3)])
    })?;
    rep.timed(|| {
        let lambdas: Vec<f64> = (0..=16).map(|k| 0.5 * k as f64).collect();
        let r = abel::convolution_homomorphism(&f0, &f2, &lambdas);
        Ok(vec![ReportRow::residual("abel.homomorphism", "spherical transform of a convolution", r, 1e-3)])
    })?;
    rep.timed(|| {
        let psi = abel::windowed_cosine(grid, p.window_lambda, p.window_inner, p.window_outer)?;
        let mut worst = 0.0f64;
        for &r in &p.probe_radii {
            if r < p.window_inner {
                let got = abel::abel_dual(|t| psi.eval(t), &HypPoint::from_polar(r, 0.4));
                let want = abel::spherical_function(Complex64::new(p.window_lambda, 0.0), r).re;
                worst = worst.max((got - want).abs());
            }
        }
        let lo = abel::l_operator_identities(&f0, &psi, &p.probe_radii, kappa, &spec)?;
        Ok(vec![
            ReportRow::residual("abel.dual_of_cosine", "dual Abel transform of cos(lambda t)", worst, 1e-8),
            ReportRow::residual("abel.l_operator.inverse", "dual Abel transform of L A f", lo.residual_inverse, 1e-3),
            ReportRow::residual("abel.l_operator.convolution", "dual Abel transform of a convolution", lo.residual_convolution, 1e-2),
        ])
    })?;
    rep.timed(|| {
        let g = abel::abel_grid(&f0, grid, &spec)?;
        let inv = abel::abel_invert(&g, kappa)?;
        let mut worst = 0.0f64;
        for r in [0.0, 0.3, 0.7, 1.2, 2.0, 3.0] {
            worst = worst.max((inv.eval(r) - f0.eval(r)).abs());
        }
        Ok(vec![ReportRow::residual("abel.inversion", "Abel inversion by the dual transform", worst, 1e-3)])
    })?;
    Ok(rep)
}

/// Plancherel, inversion, and analytic properties of the Fourier transform
/// on the disk.
pub fn fourier_plancherel(ctx: &SuiteContext) -> Result<Report> {
    let p = &ctx.params.fourier;
    let kappa = ctx.constants()?.kappa;
    let mut rep = Report::new();
    let primary = ctx.disk_phantom();
    let phantoms = [
        primary.clone(),
        PhantomSpec::gaussian(1.0, 1.0),
        PhantomSpec::gaussian(1.0, 0.8).at(&[-0.1, 0.4]),
    ];
    for (i, ph) in phantoms.iter().enumerate() {
        rep.timed(|| {
            let f = ph.disk()?;
            let (check, grid) = hfourier::plancherel_check(&f, kappa, p.lambda_max, p.dlambda, p.thetas)?;
            let ratio = check.ratio.ok_or_else(|| Error::Validation("zero phantom".into()))?;
            let mut rows = vec![ReportRow::relative(
                format!("fourier.plancherel.{i}"),
                "Fourier Plancherel with the shared kappa",
                ratio,
                1.0,
                1e-3,
            )];
            if i == 0 {
                let probes = disk_probes(&mut ctx.rng(41), p.inversion_radius, p.inversion_points);
                let err = max_abs_error(&probes, |z| Ok(hfourier::hfourier_invert(&grid, z, kappa)), |z| f.eval(z))?;
                rows.push(ReportRow::residual("fourier.inversion", "Fourier inversion on the disk", err, 1e-3));
            }
            Ok(rows)
        })?;
    }
    let f = primary.disk()?;
    rep.timed(|| {
        let total = hfourier::l1_norm(&f)?;
        let anchor = hfourier::hfourier_forward(&f, hfourier::SpectralParam::new(0.0, -0.5, 1.0)?)?;
        let mut conj = 0.0f64;
        for l in [0.7, 3.0] {
            let a = hfourier::hfourier_forward(&f, hfourier::SpectralParam::new(l, 0.0, 0.4)?)?;
            let b = hfourier::hfourier_forward(&f, hfourier::SpectralParam::new(-l, 0.0, 0.4)?)?;
            conj = conj.max((a.conj() - b).norm() / a.norm());
        }
        Ok(vec![
            ReportRow::relative("fourier.kernel_anchor", "kernel at lambda = -i rho is 1", anchor.re, total, 1e-10),
            ReportRow::residual("fourier.conjugate_symmetry", "conjugate symmetry for real f", conj, 1e-10),
        ])
    })?;
    rep.timed(|| {
        let boundary = |b: f64| Complex64::new(1.0 + 0.5 * b.cos() + 0.3 * (2.0 * b).sin(), 0.0);
        let mut worst = 0.0f64;
        for (l, eta) in [(0.5, 0.0), (2.0, 0.3), (3.0, -0.2)] {
            for r in [0.0, 0.8, 1.5] {
                let z = HypPoint::from_polar(r, 0.4);
                worst = worst.max(hfourier::eigenfunction_residual(boundary, Complex64::new(l, eta), &z, 2048)?);
            }
        }
        Ok(vec![ReportRow::residual("fourier.poisson_eigenfunction", "Poisson transform is a Laplace eigenfunction", worst, 1e-4)])
    })?;
    rep.timed(|| {
        let mut rng = ctx.rng(42);
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let lam = Complex64::new(rng.gen_range(0.2..6.0), rng.gen_range(-0.45..0.45));
            worst = worst.max(hfourier::cauchy_riemann_residual(&f, lam, rng.gen_range(0.0..2.0 * PI), 1e-2)?);
        }
        let w = hfourier::w_invariance_defect(&f, 1.5, &HypPoint::from_polar(0.6, 1.0), p.thetas)?;
        Ok(vec![
            ReportRow::residual("fourier.holomorphy", "holomorphy in the tube (Cauchy-Riemann)", worst, 1e-6),
            ReportRow::residual("fourier.w_invariance", "symmetry of the inversion integrand under lambda -> -lambda", w, 1e-6),
        ])
    })?;
    Ok(rep)
}

/// Riemann–Lebesgue decay in the tube and the `L¹` bound.
pub fn rl_scan(ctx: &SuiteContext) -> Result<Report> {
    let p = &ctx.params.rl;
    let thetas: Vec<f64> = (0..p.thetas).map(|j| 2.0 * PI * j as f64 / p.thetas as f64).collect();
    let mut rep = Report::new();
    if p.xis.len() < 2 {
        return Err(Error::Config("rl.xis needs at least two entries".into()));
    }
    rep.timed(|| {
        let rough = PhantomSpec::indicator(1.0, 1.0).at(&[0.2, 0.1]).disk()?;
        let tab = hfourier::riemann_lebesgue_scan(&rough, &p.xis, &p.etas, &thetas)?;
        let ratio = tab.decay_ratio().unwrap_or(f64::NAN);
        let smooth = PhantomSpec::bump(1.0, 1.5).at(&[0.2, 0.1]).disk()?;
        let tab = hfourier::riemann_lebesgue_scan(&smooth, &[p.xis[0], *p.xis.last().unwrap()], &p.etas, &thetas)?;
        let smooth_ratio = tab.decay_ratio().unwrap_or(f64::NAN);
        Ok(vec![
            ReportRow::at_most("rl.indicator", "Riemann-Lebesgue decay in the tube, ball indicator", ratio, 0.1, 0.0),
            ReportRow::at_most("rl.smooth", "Riemann-Lebesgue decay in the tube, smooth bump", smooth_ratio, 1e-4, 0.0),
        ])
    })?;
    rep.timed(|| {
        let f = PhantomSpec::gaussian(1.0, 1.0).at(&[0.3, -0.2]).disk()?;
        let mut rows = Vec::new();
        for (i, (xi, eta)) in [(0.0, 0.5), (0.0, -0.5), (1.0, 0.25), (3.0, -0.4), (6.0, 0.0)].iter().enumerate() {
            let (lhs, rhs) = hfourier::tube_l1_bound(&f, Complex64::new(*xi, *eta), 64)?;
            rows.push(ReportRow::at_most(format!("rl.l1_bound.{i}"), "L1 bound in the tube", lhs, rhs, 1e-12 * rhs));
        }
        Ok(rows)
    })?;
    Ok(rep)
}

/// Observed order of a rule from errors at step `h` and `h/2`.
fn observed_order(e1: f64, e2: f64) -> f64 {
    (e1 / e2).log2()
}

/// Freezes `c(2)`, `C(2)`, `κ`, the horocycle measure exponent, and the
/// range normalization, with cross-phantom consistency rows and the
/// oracle hygiene rows.
pub fn calibrate(ctx: &SuiteContext) -> Result<(Report, Constants)> {
    let spec = ctx.spec;
    let mut rep = Report::new();
    let mut c2 = f64::NAN;
    let mut big_c2 = f64::NAN;
    let mut kappa = f64::NAN;
    let mut mu = f64::NAN;
    let mut range = (f64::NAN, f64::NAN);

    rep.timed(|| {
        let origin = EuclidPoint::origin();
        let ratio = |ph: PhantomSpec| -> Result<f64> {
            let f = ph.euclid::<3>()?;
            let phi = euclid_radon::sinogram(&f, &spec);
            let b = euclid_radon::dplane_bracket(&phi, &origin, &spec, &DirectionRule::planes_3d())?;
            Ok(f.eval(&origin) / b.value)
        };
        c2 = ratio(PhantomSpec::gaussian(1.0, 1.0).at(&[0.3, -0.2, 0.1]))?;
        info!("c(2) = {c2}");
        Ok(vec![
            ReportRow::relative(
                "calibrate.c_d_3_2.gaussian_narrow",
                "d-plane constant, second phantom",
                ratio(PhantomSpec::gaussian(1.0, 0.8))?,
                c2,
                1e-3,
            ),
            ReportRow::relative(
                "calibrate.c_d_3_2.bump",
                "d-plane constant, third phantom",
                ratio(PhantomSpec::bump(1.0, 2.0).at(&[0.1, 0.2, 0.0]))?,
                c2,
                1e-3,
            ),
        ])
    })?;
    rep.timed(|| {
        let origin = H3Point::origin();
        let ratio = |ph: PhantomSpec| -> Result<f64> {
            let f = ph.h3()?;
            let phi = hyp_radon::sinogram_h3_planes(&f, &spec);
            let b = hyp_radon::hyp_tg_bracket(&phi, &origin, &spec, &DirectionRule::planes_3d())?;
            Ok(f.eval(&origin) / b.value)
        };
        big_c2 = ratio(PhantomSpec::gaussian(1.0, 1.0).at(&[0.1, -0.1, 0.05]))?;
        info!("C(2) = {big_c2}");
        Ok(vec![ReportRow::relative(
            "calibrate.C_d_3_2.gaussian_narrow",
            "hyperbolic plane constant, second phantom",
            ratio(PhantomSpec::gaussian(1.0, 0.8))?,
            big_c2,
            1e-3,
        )])
    })?;
    let grid = ctx.grid()?;
    let disk = PhantomSpec::gaussian(1.0, 1.0).at(&[0.3, -0.2]).disk()?;
    let psi = HorocycleSinogram::from_field(&disk, grid, ctx.params.horocycle.thetas, &spec)?;
    rep.timed(|| {
        let phi = |t: f64, th: f64| (-t * t).exp() * (1.0 + 0.3 * th.cos());
        let table = horocycle::duality_table(&disk, phi, &[-1.0, -0.5, 0.0, 0.5, 1.0], &spec)?;
        let (best, mismatch) = table.best();
        mu = best;
        info!("horocycle measure exponent = {mu} (mismatch {mismatch:.2e})");
        Ok(vec![ReportRow::residual(
            "calibrate.horocycle_mu_exponent",
            "horocycle measure exponent, duality mismatch",
            mismatch,
            1e-6,
        )])
    })?;
    rep.timed(|| {
        let fp = &ctx.params.fourier;
        let probe = PhantomSpec::gaussian(1.0, 1.0).disk()?;
        let (check, _) = hfourier::plancherel_check(&probe, 1.0, fp.lambda_max, fp.dlambda, fp.thetas)?;
        kappa = check.norm_sq / check.spectral_sq;
        info!("kappa = {kappa}");
        let h = horocycle::plancherel_horocycle(&disk, &psi, 1.0, mu)?;
        let kappa_h = h.lhs / h.rhs;
        Ok(vec![
            ReportRow::relative("calibrate.kappa.cross_module", "kappa from the horocycle Plancherel formula", kappa_h, kappa, 1e-3),
            ReportRow::relative("calibrate.kappa.nominal", "kappa against 1/(2 pi^2)", kappa, KAPPA_NOMINAL, 1e-3),
        ])
    })?;
    rep.timed(|| {
        let coeffs = horocycle::range_coefficients(&psi);
        let res = horocycle::resolve_range_normalization(&coeffs, 1e-2);
        let (accepted, residual) = match res.accepted {
            Some((k0, m)) => {
                let r = res
                    .table
                    .iter()
                    .find(|row| row.0 == k0 && row.1 == m)
                    .map_or(f64::NAN, |row| row.3);
                ((k0, m), r)
            }
            None => ((f64::NAN, f64::NAN), f64::NAN),
        };
        range = accepted;
        let unique = res.table.iter().filter(|row| row.2 <= 1e-2 && row.3 <= 1e-2).count();
        info!("range normalization {:?}", res.table);
        Ok(vec![
            ReportRow::residual("calibrate.range.residual", "range normalization, accepted residual", residual, 1e-2),
            ReportRow::new(
                "calibrate.range.unique",
                "range normalization, accepted candidates",
                unique as f64,
                1.0,
                0.0,
                Criterion::Absolute,
            ),
        ])
    })?;
    rep.timed(|| {
        let a = CFunctionOracle::default();
        let b = CFunctionOracle::with_cutoffs(a.cutoffs[0] + 2.0, a.cutoffs[1] + 3.0);
        let mut worst = 0.0f64;
        for l in [0.1, 0.5, 1.0, 3.0, 6.0] {
            worst = worst.max((a.density(l) - b.density(l)).abs() / a.density(l));
        }
        // composite two-point Gauss: order 4
        let exact = 1f64.exp() - 1.0;
        let e = |panels| (composite(2, panels, 0.0, 1.0, f64::exp) - exact).abs();
        let gauss_order = observed_order(e(4), e(8));
        // fourth-order central difference
        let d = |h| (d_dp(f64::sin, 1.0, h).value - 1f64.cos()).abs();
        let fd_order = observed_order(d(0.2), d(0.1));
        // trapezoid rule on the circle converges geometrically for analytic integrands
        let circle = |m| (integrate_circle(|t| (t.cos()).exp(), m) - bessel_i0(1.0)).abs();
        Ok(vec![
            ReportRow::residual("oracle.c_cutoff_independence", "c-function fit, cutoff independence", worst, 1e-6),
            ReportRow::new("oracle.gauss_order", "Gauss-Legendre convergence order", gauss_order, 4.0, 0.25, Criterion::Absolute),
            ReportRow::new("oracle.fd_order", "finite-difference convergence order", fd_order, 4.0, 0.25, Criterion::Absolute),
            ReportRow::residual("oracle.circle_trapezoid", "circle trapezoid, geometric convergence", circle(16), 1e-14),
        ])
    })?;
    let constants = Constants {
        c_d_3_2: c2,
        big_c_d_3_2: big_c2,
        kappa,
        horocycle_mu_exponent: mu,
        range_kappa0: range.0,
        range_mu: range.1,
    };
    Ok((rep, constants))
}

/// `I₀(x) = Σ (x/2)^{2k} / (k!)²`.
fn bessel_i0(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..40 {
        term *= (x / 2.0).powi(2) / (k * k) as f64;
        sum += term;
    }
    sum
}

/// The pipelines by subcommand name, in the order `all` runs them.
pub const PIPELINES: [&str; 9] = [
    "euclid-invert",
    "hyp-invert",
    "product-invert",
    "horocycle-roundtrip",
    "horocycle-range",
    "support-scan",
    "abel-identities",
    "fourier-plancherel",
    "rl-scan",
];

pub fn run_pipeline(name: &str, ctx: &SuiteContext) -> Result<Report> {
    match name {
        "euclid-invert" => euclid_invert(ctx),
        "hyp-invert" => hyp_invert(ctx),
        "product-invert" => product_invert(ctx),
        "horocycle-roundtrip" => horocycle_roundtrip(ctx),
        "horocycle-range" => horocycle_range(ctx),
        "support-scan" => support_scan(ctx),
        "abel-identities" => abel_identities(ctx),
        "fourier-plancherel" => fourier_plancherel(ctx),
        "rl-scan" => rl_scan(ctx),
        other => Err(Error::Config(format!("unknown pipeline `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probes_are_deterministic_and_inside() {
        let ctx = SuiteContext::new(QuadratureSpec::default());
        let a = ball_probes(&mut ctx.rng(1), &[1.0, 2.0], 0.5, 10);
        let b = ball_probes(&mut ctx.rng(1), &[1.0, 2.0], 0.5, 10);
        assert_eq!(a, b);
        assert!(a.iter().all(|p| p.distance(&EuclidPoint { coords: [1.0, 2.0] }) <= 0.5));
        let d = disk_probes(&mut ctx.rng(2), 1.5, 10);
        assert!(d.iter().all(|z| z.distance_from_origin() <= 1.5 + 1e-12));
    }

    #[test]
    fn uncalibrated_pipelines_refuse() {
        let ctx = SuiteContext::new(QuadratureSpec::default());
        assert!(matches!(support_scan(&ctx), Err(Error::NotCalibrated(_))));
    }

    #[test]
    fn params_reject_unknown_keys() {
        let r: std::result::Result<SuiteParams, _> = serde_json::from_str(r#"{"abel": {"window": 1}}"#);
        assert!(r.is_err());
        let p: SuiteParams = serde_json::from_str(r#"{"hyp": {"h2_probes": 3}}"#).unwrap();
        assert_eq!(p.hyp.h2_probes, 3);
        assert_eq!(p.hyp.h3_probes, 20);
    }

    #[test]
    fn i0_series() {
        // I₀(1) = 1.2660658777520082
        assert!((bessel_i0(1.0) - 1.266_065_877_752_008_2).abs() < 1e-15);
    }
}
