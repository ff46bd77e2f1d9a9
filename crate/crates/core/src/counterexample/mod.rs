//! The four-piece convex spline on the half-plane `x1 > -23/240`.
//!
//! Every quantity here is an exact rational. The spline is convex and 1-smooth on
//! its open domain, yet its data at `(0,0)` and `(2,0)` violate the co-coercivity
//! inequality that holds for every 1-smooth convex function on the whole plane.

mod exact;
mod properties;
mod sampled;

pub use exact::{from_f64, int, rat, ExactPoint, ExactScalar, HalfPlane, QuadraticPiece, Sym2};
pub use properties::{global_bound_excess, local_cocoercivity_worst, sample_data, verify_bounds_on_spline, FLOAT_TOL};
pub use sampled::{lattice_size, verify_sampled, GridSpec, SampledConfig};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numfmt::over_denominator;
use crate::report::VerificationReport;

/// One quadratic piece together with the closed half-planes cutting out its region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub quad: QuadraticPiece,
    pub region: Vec<HalfPlane>,
}

impl Piece {
    pub fn contains(&self, p: &ExactPoint) -> bool {
        self.region.iter().all(|h| h.contains(p))
    }
}

/// A seam line shared by two pieces (1-based indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seam {
    pub lower: usize,
    pub upper: usize,
    pub line: HalfPlane,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseQuadratic {
    pub pieces: Vec<Piece>,
    pub domain: HalfPlane,
    pub seams: Vec<Seam>,
}

fn closed(n0: i64, n1: i64, offset: ExactScalar) -> HalfPlane {
    HalfPlane::new(ExactPoint::new(int(n0), int(n1)), offset, false)
}

/// The counterexample spline `F`.
pub fn spline() -> PiecewiseQuadratic {
    let origin = ExactPoint::new(int(0), int(0));
    let shifted = ExactPoint::from_ratios((3, 4), (-1, 4));

    let f1 = QuadraticPiece::half_dist_sq(&origin);
    let f2 = f1.minus(&QuadraticPiece::affine_sq(&int(3), &int(-1), &rat(1, 12)).scaled(&rat(1, 20)));
    let f3 = QuadraticPiece::half_dist_sq(&shifted).plus(&QuadraticPiece::constant(rat(1, 48)));
    let f4 = f3.minus(&QuadraticPiece::affine_sq(&int(1), &int(-2), &rat(49, 48)).scaled(&rat(1, 10)));

    let pieces = vec![
        Piece { quad: f1, region: vec![closed(3, -1, rat(1, 12))] },
        Piece { quad: f2, region: vec![closed(-3, 1, rat(-1, 12)), closed(3, -1, rat(31, 12))] },
        Piece { quad: f3, region: vec![closed(-3, 1, rat(-31, 12)), closed(1, -2, rat(49, 48))] },
        Piece { quad: f4, region: vec![closed(-1, 2, rat(-49, 48))] },
    ];
    let seams = vec![
        Seam { lower: 1, upper: 2, line: closed(3, -1, rat(1, 12)), label: "3x0 - x1 = 1/12".into() },
        Seam { lower: 2, upper: 3, line: closed(3, -1, rat(31, 12)), label: "3x0 - x1 = 31/12".into() },
        Seam { lower: 3, upper: 4, line: closed(1, -2, rat(49, 48)), label: "x0 - 2x1 = 49/48".into() },
    ];
    PiecewiseQuadratic {
        pieces,
        domain: HalfPlane::new(ExactPoint::new(int(0), int(-1)), rat(23, 240), true),
        seams,
    }
}

impl PiecewiseQuadratic {
    /// Copy with `delta` added to the constant term of piece `index` (1-based).
    /// Used to inject faults into the verification routines.
    pub fn with_constant_offset(&self, index: usize, delta: ExactScalar) -> Self {
        let mut out = self.clone();
        out.pieces[index - 1].quad.c += delta;
        out
    }

    pub fn in_domain(&self, p: &ExactPoint) -> bool {
        self.domain.contains(p)
    }

    fn check_domain(&self, p: &ExactPoint) -> Result<()> {
        if self.in_domain(p) {
            Ok(())
        } else {
            Err(Error::Domain(p.x0.to_string(), p.x1.to_string()))
        }
    }

    /// 1-based index of the lowest piece whose region contains `p`.
    pub fn classify_region(&self, p: &ExactPoint) -> Result<usize> {
        self.check_domain(p)?;
        self.classify_region_unchecked(p).ok_or_else(|| Error::Range(format!("no region claims {p}")))
    }

    /// Region lookup without the domain test. The region predicates extend past
    /// the boundary `x1 = -23/240`, where the pieces no longer glue convexly.
    pub fn classify_region_unchecked(&self, p: &ExactPoint) -> Option<usize> {
        self.pieces.iter().position(|piece| piece.contains(p)).map(|i| i + 1)
    }

    /// All 1-based pieces whose region contains `p`.
    pub fn claiming_pieces(&self, p: &ExactPoint) -> Vec<usize> {
        self.pieces.iter().enumerate().filter(|(_, pc)| pc.contains(p)).map(|(i, _)| i + 1).collect()
    }

    pub fn piece(&self, index: usize) -> &QuadraticPiece {
        &self.pieces[index - 1].quad
    }

    pub fn eval(&self, p: &ExactPoint) -> Result<ExactScalar> {
        let k = self.classify_region(p)?;
        Ok(self.piece(k).eval(p))
    }

    pub fn grad(&self, p: &ExactPoint) -> Result<ExactPoint> {
        let k = self.classify_region(p)?;
        Ok(self.piece(k).grad(p))
    }

    /// Value and gradient identities of adjacent pieces restricted to each seam line.
    pub fn verify_c1_seams(&self) -> VerificationReport {
        let mut report = VerificationReport::new("C1 seams");
        for seam in &self.seams {
            let diff = self.piece(seam.upper).minus(self.piece(seam.lower));
            let (p, d) = seam.line.boundary_line();
            let value_coeffs = diff.restrict_to_line(&p, &d);
            let values_agree = value_coeffs.iter().all(Zero::is_zero);
            let grad_const = diff.grad(&p);
            let grad_slope = diff.a.apply(&d);
            let grads_agree = [&grad_const.x0, &grad_const.x1, &grad_slope.x0, &grad_slope.x1]
                .iter()
                .all(|c| c.is_zero());
            let detail = format!(
                "F{} vs F{}: value identity {}, gradient identity {}",
                seam.lower,
                seam.upper,
                if values_agree { "holds" } else { "fails" },
                if grads_agree { "holds" } else { "fails" }
            );
            report.push(format!("seam {}", seam.label), values_agree && grads_agree, detail);
        }
        report
    }

    /// Per-piece Hessian tests: `0 <= A <= I` via exact trace/determinant checks.
    pub fn verify_smooth_convex_pieces(&self) -> VerificationReport {
        let mut report = VerificationReport::new("piece spectra");
        for (i, piece) in self.pieces.iter().enumerate() {
            let a = &piece.quad.a;
            let convex = !a.det().is_negative() && !a.trace().is_negative();
            let shifted = a.minus_identity();
            let smooth = !shifted.det().is_negative() && !shifted.trace().is_positive();
            let spectrum = spectrum_label(a);
            report.push(
                format!("piece {}", i + 1),
                convex && smooth,
                format!("trace {}, det {}, eigenvalues {}", a.trace(), a.det(), spectrum),
            );
        }
        report
    }

    /// Both sides of the co-coercivity inequality for `x = (0,0)`, `y = (2,0)`, `L = 1`.
    pub fn violation_witness(&self) -> Result<ViolationWitness> {
        let x = ExactPoint::new(int(0), int(0));
        let y = ExactPoint::new(int(2), int(0));
        let (fx, gx) = (self.eval(&x)?, self.grad(&x)?);
        let (fy, gy) = (self.eval(&y)?, self.grad(&y)?);
        let gdiff = gy.sub(&gx);
        let lhs = gdiff.norm_sq() / int(2);
        let rhs = &fy - &fx - gx.dot(&y.sub(&x));
        Ok(ViolationWitness { fx, gx, fy, gy, excess: &lhs - &rhs, lhs, rhs })
    }

    pub fn verify_violation(&self) -> VerificationReport {
        let mut report = VerificationReport::new("co-coercivity violation");
        match self.violation_witness() {
            Ok(w) => {
                let show = |r: &ExactScalar| over_denominator(r, 23040).unwrap_or_else(|| r.to_string());
                report.push("left side 1/2|F'(2,0) - F'(0,0)|^2", true, show(&w.lhs));
                report.push("right side F(2,0) - F(0,0) - <F'(0,0), (2,0)>", true, show(&w.rhs));
                report.push(
                    "strict violation",
                    w.excess.is_positive(),
                    format!("violation = {} (= {})", show(&w.excess), w.excess),
                );
            }
            Err(e) => report.push("strict violation", false, e.to_string()),
        }
        report
    }
}

fn spectrum_label(a: &Sym2) -> String {
    if *a == Sym2::identity() {
        "{1,1}".into()
    } else if a.det().is_zero() && a.trace() == int(1) {
        "{0,1}".into()
    } else if a.det().is_zero() && a.trace().is_zero() {
        "{0,0}".into()
    } else {
        "inside [0,1]".into()
    }
}

/// Exact data of the violated co-coercivity instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationWitness {
    pub fx: ExactScalar,
    pub gx: ExactPoint,
    pub fy: ExactScalar,
    pub gy: ExactPoint,
    /// `1/2 ||g_y - g_x||^2`
    pub lhs: ExactScalar,
    /// `f_y - f_x - <g_x, y - x>`
    pub rhs: ExactScalar,
    pub excess: ExactScalar,
}
