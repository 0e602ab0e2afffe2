//! Certificates built on top of the recomputed Picard actions.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use super::charts::{c20_offsets, CHART_COUNT};
use super::germ::*;
use super::pullback::*;
use super::GeomError;
use crate::bmap::{apply_qr, param_act, ParamVector, Point};
use crate::exact::{linalg, Field, Jet, Rational};
use crate::generator::Generator;
use crate::lattice::{anticanonical, BiLatticeMap, DivisorClass, Model};

const BOUND: i64 = 1_000_000;

/// A divisor sent by a generator onto something of codimension at least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionWitness {
    pub divisor: String,
    pub image: String,
    pub image_dimension: usize,
}

#[derive(Clone, Debug)]
pub struct PseudoIsoCertificate {
    pub generator: Generator,
    pub model: Model,
    pub forward: PullbackReport,
    pub backward: PullbackReport,
    pub mutually_inverse: bool,
    pub pairing_preserved: bool,
    pub anticanonical_fixed: bool,
    pub witnesses: Vec<ContractionWitness>,
}

impl PseudoIsoCertificate {
    pub fn passed(&self) -> bool {
        self.mutually_inverse && self.pairing_preserved && self.anticanonical_fixed && self.witnesses.is_empty()
    }
}

/// Checks that `g` lifts to a pseudo-isomorphism `X_α → X_ᾱ`: the recomputed
/// pullbacks in both directions are mutually inverse, preserve the pairing
/// (with the curve action taken as the adjoint of the backward pullback) and
/// fix `−K`; no divisor is contracted.
pub fn pseudo_iso_certificate<R: Rng + ?Sized>(
    g: Generator,
    model: Model,
    a: &ParamVector<Rational>,
    rng: &mut R,
    budget: Budget,
) -> Result<PseudoIsoCertificate, GeomError> {
    let abar = param_act(g, a)?;
    let forward = matrix_of(g, model, a, rng, budget)?;
    let backward = matrix_of(g, model, &abar, rng, budget)?;
    let witnesses = contraction_witnesses(g, model, a, rng, budget)?;
    Ok(assemble_certificate(forward, backward, witnesses))
}

/// The certificate from already computed pullbacks at `α` (forward) and at
/// `ᾱ` (backward) and the contraction witnesses at `α`.
pub fn assemble_certificate(
    forward: PullbackReport,
    backward: PullbackReport,
    witnesses: Vec<ContractionWitness>,
) -> PseudoIsoCertificate {
    let (g, model) = (forward.generator, forward.model);
    let (f, b) = (forward.matrix(), backward.matrix());
    let id = linalg::identity(model.rank());
    let mutually_inverse = linalg::mat_mul(&f, &b) == id && linalg::mat_mul(&b, &f) == id;
    let gd = model.pairing_diag();
    let bt = linalg::transpose(&b);
    let curve: linalg::Matrix =
        bt.iter().enumerate().map(|(i, row)| row.iter().enumerate().map(|(j, x)| &gd[i] * x * &gd[j]).collect()).collect();
    let pairing_preserved = BiLatticeMap { model, divisor_matrix: f.clone(), curve_matrix: curve }.preserves_pairing();
    let k = anticanonical(model);
    let anticanonical_fixed = DivisorClass { model, coeffs: linalg::mat_vec(&f, &k.coeffs) } == k;
    PseudoIsoCertificate { generator: g, model, forward, backward, mutually_inverse, pairing_preserved, anticanonical_fixed, witnesses }
}

type JetGerm = Point<JetSeries>;

fn leaf_germ<F: Coefficient>(leaf: usize, v: &[Rational], work: usize) -> Point<Series<F>> {
    let t = || Series::<F>::variable(work);
    let c = |i: usize| Series::<F>::constant(F::free(v[i].clone(), i)).with_work(work);
    let inv_t = || t().inverse().expect("t is invertible");
    match leaf {
        // Q1 = 0
        0 => [t(), c(0), c(1), c(2)],
        // Q2 = 0
        1 => [c(0), t(), c(1), c(2)],
        // Q0 = 0
        2 => [inv_t(), c(0) * inv_t(), c(1), c(2)],
        // R0 = 0
        _ => [c(0), c(1), inv_t(), c(2) * inv_t()],
    }
}

pub const LEAF_NAMES: [&str; 4] = ["Q1=0", "Q2=0", "Q0=0", "R0=0"];

/// Which homogeneous coordinates vanish at every sampled image limit.
fn vanishing_locus<R: Rng + ?Sized>(
    g: Generator,
    a: &ParamVector<Rational>,
    rng: &mut R,
    budget: Budget,
    germ: &dyn Fn(&[Rational], usize) -> Result<Point<Series<Rational>>, GermFail>,
) -> String {
    const NAMES: [&str; 6] = ["Q0", "Q1", "Q2", "R0", "R1", "R2"];
    let mut zero = [true; 6];
    for _ in 0..4 {
        let lim = with_retries(rng, 3, BOUND, budget, |v, work| {
            let y = germ(v, work)?;
            let z = apply_qr(g, &y, &a.lift()).map_err(|_| GermFail::Precision)?;
            homogeneous_limit(&z)
        });
        if let Some([q, r]) = lim {
            for (i, x) in q.iter().chain(r.iter()).enumerate() {
                zero[i] &= Field::is_zero(x);
            }
        }
    }
    let names: Vec<&str> = NAMES.iter().zip(zero).filter(|(_, z)| *z).map(|(n, _)| *n).collect();
    if names.is_empty() {
        String::from("a locus with no vanishing coordinate")
    } else {
        format!("{}=0", names.join("="))
    }
}

/// Divisors contracted by `g` at `α`: the four coordinate leaves and every
/// exceptional divisor of `model` are mapped and the dimension of the image is
/// measured in the charts of `model`.
pub fn contraction_witnesses<R: Rng + ?Sized>(
    g: Generator,
    model: Model,
    a: &ParamVector<Rational>,
    rng: &mut R,
    budget: Budget,
) -> Result<Vec<ContractionWitness>, GeomError> {
    let mut out = Vec::new();
    for (leaf, name) in LEAF_NAMES.iter().enumerate() {
        let landing = image_of_family(
            g,
            model,
            a,
            rng,
            budget,
            |v, w| Ok(leaf_germ::<Jet<3>>(leaf, v, w)),
            |v, w| Ok(leaf_germ::<Rational>(leaf, v, w)),
        )?;
        if let Landing::Contracted { rank } = landing {
            let image = vanishing_locus(g, a, rng, budget, &|v, w| Ok(leaf_germ::<Rational>(leaf, v, w)));
            out.push(ContractionWitness { divisor: String::from(*name), image, image_dimension: rank });
        }
    }
    for k in model_charts(model) {
        if let Landing::Contracted { rank } = image_of_exceptional(g, model, k, a, rng, budget)? {
            let image = vanishing_locus(g, a, rng, budget, &|v, w| exceptional_germ::<Rational>(k, v, a, w));
            out.push(ContractionWitness { divisor: format!("E{k}"), image, image_dimension: rank });
        }
    }
    Ok(out)
}

/// Dimensions of all centers, recomputed from the charts.
pub fn center_dimensions<R: Rng + ?Sized>(a: &ParamVector<Rational>, rng: &mut R, budget: Budget) -> Option<Vec<u32>> {
    (1..=CHART_COUNT).map(|k| center_dimension(k, a, rng, budget).map(|d| d as u32)).collect()
}

/// `3Hq + 3Hr − Σ (3 − d_k) E_k` from recomputed center dimensions.
pub fn anticanonical_from_dims(model: Model, dims: &[u32]) -> DivisorClass {
    let mut k = DivisorClass::zero(model);
    k.coeffs[0] = Rational::from_integer(3.into());
    k.coeffs[1] = Rational::from_integer(3.into());
    for i in 0..model.blowups() {
        k.coeffs[i + 2] = Rational::from_integer((dims[i] as i64 - 3).into());
    }
    k
}

/// Rank, pairing and anticanonical class of a model, with the center
/// dimensions recomputed from the atlas.
#[derive(Clone, Debug)]
pub struct IntersectionSuite {
    pub model: Model,
    pub rank: usize,
    pub pairing_diagonal: bool,
    pub center_dims: Vec<u32>,
    pub dims_match_table: bool,
    pub anticanonical: DivisorClass,
    pub anticanonical_matches: bool,
}

impl IntersectionSuite {
    pub fn passed(&self) -> bool {
        self.rank == 2 + self.model.blowups() && self.pairing_diagonal && self.dims_match_table && self.anticanonical_matches
    }
}

pub fn intersection_suite<R: Rng + ?Sized>(
    model: Model,
    a: &ParamVector<Rational>,
    rng: &mut R,
    budget: Budget,
) -> Option<IntersectionSuite> {
    let n = model.blowups();
    let all = center_dimensions(a, rng, budget)?;
    let center_dims = all[..n].to_vec();
    let g = model.pairing_diag();
    let one = Rational::from_integer(1.into());
    let pairing_diagonal = g.len() == 2 + n && g.iter().enumerate().all(|(i, x)| if i < 2 { *x == one } else { *x == -one.clone() });
    let anticanonical_c = anticanonical_from_dims(model, &center_dims);
    Some(IntersectionSuite {
        model,
        rank: model.rank(),
        pairing_diagonal,
        dims_match_table: center_dims == model.center_dims(),
        anticanonical_matches: anticanonical_c == anticanonical(model),
        anticanonical: anticanonical_c,
        center_dims,
    })
}

/// What is known about `C21 = w_α0(C20)`.
#[derive(Clone, Debug)]
pub struct C21Report {
    /// Image points of `Ê20` checked against the equations of `C21`.
    pub samples: usize,
    pub equations_hold: bool,
    /// Dimension of the image of `C20` in P²×P².
    pub dimension: usize,
    /// `w_α0(Ê20)` at `ᾱ` and `w_α0(Ê21)` at `α`.
    pub forward: Landing,
    pub backward: Landing,
}

impl C21Report {
    pub fn consistent(&self) -> bool {
        self.equations_hold && self.dimension == 1 && self.forward == Landing::Exceptional(21) && self.backward == Landing::Exceptional(20)
    }
}

/// `R0 = 0`, `X(1 + ρ)² = 1`, `Y = ρ² X` with `X = −c1 q1/s1`,
/// `Y = −c2 q2/s2`, `ρ = R2/R1`, at a homogeneous point.
pub fn on_c21(p: &[[Rational; 3]; 2], a: &ParamVector<Rational>) -> bool {
    let Some((c1, c2)) = c20_offsets(a) else { return false };
    let [q, r] = p;
    if !Field::is_zero(&r[0]) || Field::is_zero(&q[0]) || Field::is_zero(&r[1]) {
        return false;
    }
    let x = -(&c1 * &q[1] / &q[0]) / &a.s1;
    let y = -(&c2 * &q[2] / &q[0]) / &a.s2;
    let rho = &r[2] / &r[1];
    let one = Rational::from_integer(1.into());
    let e1 = &x * (&one + &rho) * (&one + &rho) == one;
    e1 && y == &rho * &rho * &x
}

pub fn c21_center<R: Rng + ?Sized>(
    a: &ParamVector<Rational>,
    rng: &mut R,
    samples: usize,
    budget: Budget,
) -> Result<C21Report, GeomError> {
    let g = Generator::Wa0;
    let abar = param_act(g, a)?;
    let mut ok = true;
    let mut done = 0;
    for _ in 0..samples {
        let p = with_retries(rng, 3, BOUND, budget, |v, work| {
            let y = exceptional_germ::<Rational>(20, v, &abar, work)?;
            let z = apply_qr(g, &y, &abar.lift()).map_err(|_| GermFail::Precision)?;
            homogeneous_limit(&z)
        })
        .ok_or(GeomError::Sampling("points of C21".into()))?;
        ok &= on_c21(&p, a);
        done += 1;
    }
    let dimension = with_retries(rng, 3, BOUND, budget, |v, work| {
        let y: JetGerm = exceptional_germ::<Jet<3>>(20, v, &abar, work)?;
        let z = apply_qr(g, &y, &abar.lift()).map_err(|_| GermFail::Precision)?;
        base_rank(&z)
    })
    .ok_or(GeomError::Sampling("dimension of C21".into()))?;
    let forward = image_of_exceptional(g, Model::X21, 20, &abar, rng, budget)?;
    let backward = image_of_exceptional(g, Model::X21, 21, a, rng, budget)?;
    Ok(C21Report { samples: done, equations_hold: ok, dimension, forward, backward })
}
