//! Geometric recomputation of the Picard action of a generator.
//!
//! For `g: X_α ⇢ X_ᾱ` the column of `g^*` at a basis class is the class of
//! the preimage, written as `a Hq + b Hr − Σ μ_j [Ê_j]`:
//!
//! - for `Hq`, `Hr` the preimage of a general hyperplane section is the
//!   numerator of the pulled-back linear form;
//! - for `E_k` the preimage of `Ê_k` is the image of `Ê_k` under the inverse
//!   map, which for these involutions is `g` at `ᾱ`; it is either another
//!   exceptional divisor, the proper transform of a hypersurface (found by
//!   interpolation), or contracted.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::charts::{chart, to_base};
use super::germ::*;
use super::GeomError;
use crate::bmap::{apply_qr, param_act, ParamVector, Point};
use crate::exact::{linalg, random_rational, Field, Jet, MultiPoly, RatFunc, Rational};
use crate::generator::Generator;
use crate::lattice::{BiLatticeMap, DivisorClass, LatticeError, Model};

const BOUND: i64 = 1_000_000;


/// Charts present in a model.
pub fn model_charts(model: Model) -> core::ops::RangeInclusive<usize> {
    1..=model.blowups()
}

/// Exceptional divisors of the model whose center lies on `Ê_k`.
pub fn contained_in(model: Model, k: usize) -> Vec<usize> {
    model_charts(model).filter(|&j| chart(j).and_then(|c| c.prior) == Some(k)).collect()
}

/// Class of the proper transform `Ê_k` in the basis of total transforms.
pub fn irreducible_class(model: Model, k: usize) -> DivisorClass {
    let mut c = DivisorClass::e(model, k);
    for j in contained_in(model, k) {
        c = c.sub(&DivisorClass::e(model, j));
    }
    c
}

/// A hypersurface of P²×P², given by its affine equation in `q1, q2, r1, r2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypersurface {
    pub equation: MultiPoly,
    pub bidegree: (u32, u32),
}

impl Hypersurface {
    pub fn new(equation: MultiPoly) -> Self {
        let a = equation.degree_in_group(&["q1", "q2"]);
        let b = equation.degree_in_group(&["r1", "r2"]);
        Hypersurface { equation, bidegree: (a, b) }
    }
}

fn base_env<F: Field>(y: &Point<F>) -> impl Fn(&str) -> Option<F> + '_ {
    move |name| match name {
        "q1" => Some(y[0].clone()),
        "q2" => Some(y[1].clone()),
        "r1" => Some(y[2].clone()),
        "r2" => Some(y[3].clone()),
        _ => None,
    }
}

/// Multiplicity of the hypersurface along `Ê_j`: the order along a germ
/// transversal to `Ê_j` of `F / (λ_Q^a λ_R^b)` with random linear forms `λ`.
pub fn multiplicity<R: Rng + ?Sized>(
    hs: &Hypersurface,
    j: usize,
    a: &ParamVector<Rational>,
    rng: &mut R,
    budget: Budget,
) -> Option<i64> {
    let (da, db) = hs.bidegree;
    with_retries(rng, 9, BOUND, budget, |v, work| {
        let y = exceptional_germ::<Rational>(j, &v[..3], a, work)?;
        let f = hs.equation.eval(&base_env(&y)).map_err(|_| GermFail::Degenerate)?;
        let c = |i: usize| Series::<Rational>::constant(v[i].clone());
        let lq = c(3) + c(4) * y[0].clone() + c(5) * y[1].clone();
        let lr = c(6) + c(7) * y[2].clone() + c(8) * y[3].clone();
        let of = order(&f)?.ok_or(GermFail::Degenerate)?;
        let oq = order(&lq)?.ok_or(GermFail::Degenerate)?;
        let or = order(&lr)?.ok_or(GermFail::Degenerate)?;
        Ok(of - da as i64 * oq - db as i64 * or)
    })
}

/// The class of the proper transform of a hypersurface in `X_α`, with the
/// multiplicities along each `Ê_j` (minimum over `budget.trials` germs; `unstable`
/// if the germs disagreed).
pub fn class_of<R: Rng + ?Sized>(
    hs: &Hypersurface,
    model: Model,
    a: &ParamVector<Rational>,
    rng: &mut R,
    budget: Budget,
) -> Result<(DivisorClass, Vec<i64>, bool), GeomError> {
    let (da, db) = hs.bidegree;
    let mut class = DivisorClass::hq(model)
        .scale(&Rational::from_integer(da.into()))
        .add(&DivisorClass::hr(model).scale(&Rational::from_integer(db.into())));
    let mut mults = Vec::new();
    let mut unstable = false;
    for j in model_charts(model) {
        let mut seen = Vec::new();
        for _ in 0..budget.trials.max(1) {
            seen.push(multiplicity(hs, j, a, rng, budget).ok_or(GeomError::Sampling(format!("multiplicity along E{j}")))?);
        }
        let mu = *seen.iter().min().expect("nonempty");
        unstable |= seen.iter().any(|&m| m != mu);
        class = class.sub(&irreducible_class(model, j).scale(&Rational::from_integer(mu.into())));
        mults.push(mu);
    }
    Ok((class, mults, unstable))
}

/// Preimage under `g` (at `α`) of a general section `c0 + c1 x + c2 y = 0` of
/// `Hq` (`which = 0`) or `Hr` (`which = 1`).
pub fn hyperplane_preimage<R: Rng + ?Sized>(
    g: Generator,
    which: usize,
    a: &ParamVector<Rational>,
    rng: &mut R,
) -> Result<Hypersurface, GeomError> {
    let x: Point<RatFunc> = [RatFunc::var("q1"), RatFunc::var("q2"), RatFunc::var("r1"), RatFunc::var("r2")];
    let img = apply_qr(g, &x, &a.lift::<RatFunc>())?;
    let c: Vec<RatFunc> = (0..3).map(|_| RatFunc::constant(random_rational(rng, BOUND))).collect();
    let phi = c[0].clone() + c[1].clone() * img[2 * which].clone() + c[2].clone() * img[2 * which + 1].clone();
    Ok(Hypersurface::new(phi.numer().clone()))
}

/// Where the image of a divisor goes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Landing {
    /// Onto the exceptional divisor `Ê_j`.
    Exceptional(usize),
    /// Onto the proper transform of a hypersurface.
    Hypersurface(Hypersurface),
    /// Onto something of lower dimension; `rank` is the image dimension.
    Contracted { rank: usize },
}

impl Landing {
    pub fn describe(&self) -> String {
        match self {
            Landing::Exceptional(j) => format!("E{j}"),
            Landing::Hypersurface(h) => format!("hypersurface of bidegree ({}, {}): {}", h.bidegree.0, h.bidegree.1, h.equation),
            Landing::Contracted { rank } => format!("contracted to dimension {rank}"),
        }
    }
}

enum Probe {
    Exceptional(usize),
    Base(usize),
}

/// Image under `g` at parameters `a` of a germ family `y` (in base
/// coordinates of `X_a`), inspected in the charts of `model` at `g(a)`.
fn probe(
    g: Generator,
    model: Model,
    y: &Point<JetSeries>,
    a: &ParamVector<Rational>,
    work: usize,
    budget: Budget,
) -> Result<Probe, GermFail> {
    let last = budget.is_last(work);
    let soft = if last { GermFail::Degenerate } else { GermFail::Precision };
    let z = apply_qr(g, y, &a.lift()).map_err(|_| soft)?;
    let b = param_act(g, a).map_err(|_| GermFail::Degenerate)?.lift::<JetSeries>();
    for j in model_charts(model) {
        let landed = match lands_in(j, &z, &b) {
            Ok(p) => p,
            Err(e) => return Err(e),
        };
        if let Some(p) = landed {
            if landing_rank(j, &p) == 3 {
                return Ok(Probe::Exceptional(j));
            }
        }
    }
    Ok(Probe::Base(base_rank(&z)?))
}

/// Image under `g` (at parameters `a`) of the divisor `Ê_k` of `X_a`.
pub fn image_of_exceptional<R: Rng + ?Sized>(
    g: Generator,
    model: Model,
    k: usize,
    a: &ParamVector<Rational>,
    rng: &mut R,
    budget: Budget,
) -> Result<Landing, GeomError> {
    let found = with_retries(rng, 3, BOUND, budget, |free, work| {
        let y = exceptional_germ::<Jet<3>>(k, free, a, work)?;
        probe(g, model, &y, a, work, budget)
    })
    .ok_or(GeomError::Sampling(format!("image of E{k} under {}", g.name())))?;
    image_landing(found, g, a, rng, budget, |free, work| exceptional_germ::<Rational>(k, free, a, work))
}

/// Image under `g` (at `a`) of an arbitrary germ family, for divisors that are
/// not exceptional (the vertical leaves). `germ` builds the base germ from
/// three free values.
pub fn image_of_family<R: Rng + ?Sized>(
    g: Generator,
    model: Model,
    a: &ParamVector<Rational>,
    rng: &mut R,
    budget: Budget,
    jet_germ: impl Fn(&[Rational], usize) -> Result<Point<JetSeries>, GermFail>,
    plain_germ: impl Fn(&[Rational], usize) -> Result<Point<Series<Rational>>, GermFail>,
) -> Result<Landing, GeomError> {
    let found = with_retries(rng, 3, BOUND, budget, |free, work| probe(g, model, &jet_germ(free, work)?, a, work, budget))
        .ok_or(GeomError::Sampling(format!("image of a divisor under {}", g.name())))?;
    image_landing(found, g, a, rng, budget, plain_germ)
}

fn image_landing<R: Rng + ?Sized>(
    found: Probe,
    g: Generator,
    a: &ParamVector<Rational>,
    rng: &mut R,
    budget: Budget,
    plain_germ: impl Fn(&[Rational], usize) -> Result<Point<Series<Rational>>, GermFail>,
) -> Result<Landing, GeomError> {
    match found {
        Probe::Exceptional(j) => Ok(Landing::Exceptional(j)),
        Probe::Base(r) if r < 3 => Ok(Landing::Contracted { rank: r }),
        Probe::Base(_) => {
            let sample = |rng: &mut R| {
                with_retries(rng, 3, BOUND, budget, |free, work| {
                    let y = plain_germ(free, work)?;
                    let z = apply_qr(g, &y, &a.lift()).map_err(|_| GermFail::Precision)?;
                    homogeneous_limit(&z)
                })
            };
            fit_hypersurface(&mut |r: &mut R| sample(r), rng).map(Landing::Hypersurface)
        }
    }
}

/// Exponent vectors of the bihomogeneous monomials of bidegree `(a, b)`.
fn monomials(a: u32, b: u32) -> Vec<([u32; 3], [u32; 3])> {
    let split = |d: u32| -> Vec<[u32; 3]> {
        let mut v = Vec::new();
        for i in 0..=d {
            for j in 0..=d - i {
                v.push([d - i - j, i, j]);
            }
        }
        v
    };
    let mut out = Vec::new();
    for e in split(a) {
        for f in split(b) {
            out.push((e, f));
        }
    }
    out
}

fn monomial_value(p: &[[Rational; 3]; 2], m: &([u32; 3], [u32; 3])) -> Rational {
    let mut v = Rational::from_integer(1.into());
    for i in 0..3 {
        for _ in 0..m.0[i] {
            v *= &p[0][i];
        }
        for _ in 0..m.1[i] {
            v *= &p[1][i];
        }
    }
    v
}

/// Bidegrees tried for interpolation, by increasing total degree.
pub const FIT_BIDEGREES: [(u32, u32); 14] =
    [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (1, 2), (3, 0), (0, 3), (2, 2), (3, 1), (1, 3), (3, 2), (2, 3)];

/// Smallest-degree bihomogeneous equation through points drawn by `sample`,
/// validated on fresh points.
pub fn fit_hypersurface<R: Rng + ?Sized>(
    sample: &mut dyn FnMut(&mut R) -> Option<[[Rational; 3]; 2]>,
    rng: &mut R,
) -> Result<Hypersurface, GeomError> {
    let mut pts: Vec<[[Rational; 3]; 2]> = Vec::new();
    for &(a, b) in &FIT_BIDEGREES {
        let mons = monomials(a, b);
        while pts.len() < mons.len() + 4 {
            pts.push(sample(rng).ok_or(GeomError::Sampling("interpolation points".into()))?);
        }
        let rows: linalg::Matrix = pts.iter().map(|p| mons.iter().map(|m| monomial_value(p, m)).collect()).collect();
        let null = linalg::nullspace(&rows);
        match null.len() {
            0 => continue,
            1 => {
                let coeffs = &null[0];
                for _ in 0..6 {
                    let p = sample(rng).ok_or(GeomError::Sampling("validation points".into()))?;
                    let s: Rational = mons.iter().zip(coeffs).map(|(m, c)| monomial_value(&p, m) * c).sum();
                    if !num_traits::Zero::is_zero(&s) {
                        return Err(GeomError::Fit(format!("bidegree ({a}, {b}) equation fails on a held-out point")));
                    }
                }
                let mut eq = MultiPoly::zero();
                for (m, c) in mons.iter().zip(coeffs) {
                    let term = &(&MultiPoly::var("q1").pow(m.0[1]) * &MultiPoly::var("q2").pow(m.0[2]))
                        * &(&MultiPoly::var("r1").pow(m.1[1]) * &MultiPoly::var("r2").pow(m.1[2]));
                    eq = &eq + &term.scale(c);
                }
                return Ok(Hypersurface { equation: eq.trim(), bidegree: (a, b) });
            }
            n => return Err(GeomError::Fit(format!("{n} independent equations in bidegree ({a}, {b})"))),
        }
    }
    Err(GeomError::Fit("no equation up to bidegree total 5".into()))
}

/// One irreducible piece of a pulled-back class.
#[derive(Clone, Debug)]
pub struct ComponentReport {
    /// `0` for a hyperplane section, `j` for `Ê_j`.
    pub divisor: usize,
    pub landing: Landing,
    pub multiplicities: Vec<i64>,
    pub class: DivisorClass,
    pub unstable: bool,
}

#[derive(Clone, Debug)]
pub struct ColumnReport {
    pub source: String,
    pub components: Vec<ComponentReport>,
    pub class: DivisorClass,
}

impl ColumnReport {
    /// `(a, b)` in `class = a Hq + b Hr − Σ m_k E_k`.
    pub fn bidegree(&self) -> (Rational, Rational) {
        (self.class.coeffs[0].clone(), self.class.coeffs[1].clone())
    }

    /// The `m_k` in the basis of total transforms.
    pub fn multiplicities(&self) -> Vec<Rational> {
        self.class.coeffs[2..].iter().map(|c| -c.clone()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct PullbackReport {
    pub generator: Generator,
    pub model: Model,
    pub params: ParamVector<Rational>,
    pub columns: Vec<ColumnReport>,
    pub budget: Budget,
}

impl PullbackReport {
    pub fn matrix(&self) -> linalg::Matrix {
        let n = self.model.rank();
        let mut m = linalg::zeros(n, n);
        for (j, col) in self.columns.iter().enumerate() {
            for i in 0..n {
                m[i][j] = col.class.coeffs[i].clone();
            }
        }
        m
    }

    pub fn lattice_map(&self) -> Result<BiLatticeMap, LatticeError> {
        BiLatticeMap::from_divisor_matrix(self.model, self.matrix())
    }

    pub fn unstable(&self) -> bool {
        self.columns.iter().any(|c| c.components.iter().any(|p| p.unstable))
    }
}

fn landing_class<R: Rng + ?Sized>(
    landing: &Landing,
    model: Model,
    a: &ParamVector<Rational>,
    rng: &mut R,
    budget: Budget,
) -> Result<(DivisorClass, Vec<i64>, bool), GeomError> {
    match landing {
        Landing::Exceptional(j) => Ok((irreducible_class(model, *j), vec![], false)),
        Landing::Contracted { .. } => Ok((DivisorClass::zero(model), vec![], false)),
        Landing::Hypersurface(h) => class_of(h, model, a, rng, budget),
    }
}

/// `g^*` on the Picard lattice of `model`, recomputed at parameters `a`.
/// `budget.trials` germs are used per multiplicity.
pub fn matrix_of<R: Rng + ?Sized>(
    g: Generator,
    model: Model,
    a: &ParamVector<Rational>,
    rng: &mut R,
    budget: Budget,
) -> Result<PullbackReport, GeomError> {
    if model == Model::P2xP2 {
        return Err(GeomError::Model(model));
    }
    let abar = param_act(g, a)?;
    let mut columns = Vec::new();
    for which in 0..2 {
        let mut comps: Vec<ComponentReport> = Vec::new();
        // a few independent sections; they must agree
        for _ in 0..3 {
            let hs = hyperplane_preimage(g, which, a, rng)?;
            let (class, multiplicities, unstable) = class_of(&hs, model, a, rng, budget)?;
            let disagree = comps.first().is_some_and(|c: &ComponentReport| c.class != class);
            comps.push(ComponentReport { divisor: 0, landing: Landing::Hypersurface(hs), multiplicities, class, unstable: unstable || disagree });
        }
        let class = comps[0].class.clone();
        let unstable = comps.iter().any(|c| c.unstable);
        comps.truncate(1);
        comps[0].unstable = unstable;
        columns.push(ColumnReport { source: String::from(if which == 0 { "Hq" } else { "Hr" }), components: comps, class });
    }
    for k in model_charts(model) {
        let mut parts = vec![k];
        parts.extend(contained_in(model, k));
        let mut components = Vec::new();
        let mut class = DivisorClass::zero(model);
        for &kk in &parts {
            let landing = image_of_exceptional(g, model, kk, &abar, rng, budget)?;
            let (c, multiplicities, unstable) = landing_class(&landing, model, a, rng, budget)?;
            class = class.add(&c);
            components.push(ComponentReport { divisor: kk, landing, multiplicities, class: c, unstable });
        }
        columns.push(ColumnReport { source: format!("E{k}"), components, class });
    }
    Ok(PullbackReport { generator: g, model, params: a.clone(), columns, budget })
}

/// Every chart inverts its defining tuple: `from_base ∘ to_base = id` at
/// `trials` random points.
pub fn chart_round_trip<R: Rng + ?Sized>(k: usize, a: &ParamVector<Rational>, rng: &mut R, trials: usize) -> bool {
    let mut done = 0;
    for _ in 0..trials * 10 {
        let c: Point<Rational> = core::array::from_fn(|_| random_rational(rng, BOUND));
        let Some(x) = to_base(k, &c, a) else { continue };
        match super::charts::from_base(k, &x, a) {
            Some(back) if back == c => done += 1,
            Some(_) => return false,
            None => continue,
        }
        if done == trials {
            return true;
        }
    }
    false
}
