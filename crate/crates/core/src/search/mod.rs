//! Two-stage search for Eulerian quadruples of squares `{x^2, y^2, z^2, w^2}`.
//!
//! For `x = e/f` and `m = g/h`, `y = 2xm/(x^2+1-m^2)`. Integer points `(K, J)` on
//! [`curve_ab`] give `n = J/(2 f^2 h^2 K m)` and `z = 2xn/(x^2+1-n^2)`, so that
//! `{x^2, y^2, z^2}` is an Eulerian triple. A fourth root `w = 2xr/(x^2+1-r^2)`
//! comes from points `(U, V)` on [`w_curve`] through `r = V/(y(x^2(y^2+1)+U))`;
//! five of the six pair conditions then hold by construction and only
//! `w^2 z^2 + w^2 + z^2` is left to chance.

pub mod runner;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::curve::{Curve, Point};
use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::tuple::{pair_val, param_t, PairReport, SquareTuple, Status};

/// `x = e/f`, `m = g/h`, both in lowest terms with `e, f, h > 0` and `g != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TripleParams {
    pub e: i64,
    pub f: i64,
    pub g: i64,
    pub h: i64,
}

impl TripleParams {
    pub fn new(e: i64, f: i64, g: i64, h: i64) -> Result<TripleParams> {
        if e <= 0 || f <= 0 || h <= 0 || g == 0 {
            return Err(Error::Parameter(format!(
                "need e, f, h > 0 and g != 0, got ({e}, {f}, {g}, {h})"
            )));
        }
        if e.gcd(&f) != 1 || g.gcd(&h) != 1 {
            return Err(Error::Parameter(format!("{e}/{f} or {g}/{h} is not in lowest terms")));
        }
        let p = TripleParams { e, f, g, h };
        if p.m().square() == p.x().square() + Rat::one() {
            return Err(Error::Pole(format!("m^2 = x^2 + 1 for ({e}, {f}, {g}, {h})")));
        }
        Ok(p)
    }

    pub fn x(&self) -> Rat {
        Rat::new(self.e, self.f).expect("f > 0")
    }

    pub fn m(&self) -> Rat {
        Rat::new(self.g, self.h).expect("h > 0")
    }

    pub fn y(&self) -> Rat {
        param_t(&self.x(), &self.m()).expect("pole excluded at construction")
    }
}

/// The curve whose points give `n`, with integer coefficients
///
/// `A = -2(e^4 h^4 + 2e^2 f^2 h^4 + f^4 (g^4 - 4g^2 h^2 + h^4))`,
///
/// `B = e^8 h^8 + 4e^6 f^2 h^8 - 2e^4 f^4 h^4 (g^4 + 4g^2 h^2 - 3h^4)
///      - 4e^2 f^6 h^4 (g^4 + 4g^2 h^2 - h^4) + f^8 (g^8 - 8g^6 h^2 + 14g^4 h^4 - 8g^2 h^6 + h^8)`.
pub fn curve_ab(params: &TripleParams) -> Result<Curve> {
    let (a, b) = curve_ab_coeffs(params.e, params.f, params.g, params.h);
    Curve::new(Rat::int(a), Rat::int(b))
}

pub fn curve_ab_coeffs(e: i64, f: i64, g: i64, h: i64) -> (BigInt, BigInt) {
    let [e2, f2, g2, h2] = [e, f, g, h].map(|v| BigInt::from(v) * v);
    let (e4, f4, g4, h4) = (&e2 * &e2, &f2 * &f2, &g2 * &g2, &h2 * &h2);
    let a = -2 * (&e4 * &h4 + 2 * &e2 * &f2 * &h4 + &f4 * (&g4 - 4 * &g2 * &h2 + &h4));
    let b = &e4 * &e4 * &h4 * &h4 + 4 * &e4 * &e2 * &f2 * &h4 * &h4
        - 2 * &e4 * &f4 * &h4 * (&g4 + 4 * &g2 * &h2 - 3 * &h4)
        - 4 * &e2 * &f4 * &f2 * &h4 * (&g4 + 4 * &g2 * &h2 - &h4)
        + &f4 * &f4
            * (&g4 * &g4 - 8 * &g4 * &g2 * &h2 + 14 * &g4 * &h4 - 8 * &g2 * &h4 * &h2 + &h4 * &h4);
    (a, b)
}

/// `n = J / (2 f^2 h^2 K m)`.
pub fn n_from_point4(params: &TripleParams, pt: &Point) -> Result<Rat> {
    let (k, j) = pt.coords().ok_or(Error::TwoTorsion)?;
    if k.is_zero() {
        return Err(Error::TwoTorsion);
    }
    let fh = Rat::int(params.f * params.h);
    Ok(j / (Rat::int(2) * fh.square() * k * params.m()))
}

/// `V^2 = U^3 + (x^2(2y^2+1) + y^2)U^2 + x^2 y^2 (y^2+1)(x^2+1) U`.
///
/// `A^2 - 4B = (x^2 - y^2)^2`, so the curve is singular exactly when `x^2 = y^2`.
pub fn w_curve(x: &Rat, y: &Rat) -> Result<Curve> {
    if x.is_zero() || y.is_zero() {
        return Err(Error::Parameter("w-curve needs nonzero x and y".into()));
    }
    let (a, b) = w_curve_coeffs(x, y);
    Curve::new(a, b)
}

pub fn w_curve_coeffs(x: &Rat, y: &Rat) -> (Rat, Rat) {
    let (x2, y2) = (x.square(), y.square());
    let one = Rat::one();
    let a = &x2 * (Rat::int(2) * &y2 + &one) + &y2;
    let b = &x2 * &y2 * (&y2 + &one) * (&x2 + one);
    (a, b)
}

/// `r = V / (y (x^2 (y^2+1) + U))`.
pub fn r_from_point(x: &Rat, y: &Rat, pt: &Point) -> Result<Rat> {
    let (u, v) = pt
        .coords()
        .ok_or_else(|| Error::Pole("point at infinity".into()))?;
    let den = y * (x.square() * (y.square() + Rat::one()) + u);
    if den.is_zero() {
        return Err(Error::Pole(format!("r denominator vanishes at U = {u}")));
    }
    Ok(v / den)
}

/// `y^2 r^4 + (2x^2(y^2+2) - 2y^2) r^2 + y^2 (x^2+1)^2`, square exactly when
/// `w = param_t(x, r)` makes `y^2 w^2 + y^2 + w^2` square.
pub fn w_quartic(x: &Rat, y: &Rat, r: &Rat) -> Rat {
    let (x2, y2, r2) = (x.square(), y.square(), r.square());
    &y2 * r2.square()
        + (Rat::int(2) * &x2 * (&y2 + Rat::int(2)) - Rat::int(2) * &y2) * &r2
        + &y2 * (x2 + Rat::one()).square()
}

/// An integer-coefficient model of a rational curve: `U = U'/s^2`, `V = V'/s^3`
/// turns the curve into `V'^2 = U'^3 + s^2 A U'^2 + s^4 B U'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralModel {
    pub scale: BigInt,
    pub curve: Curve,
}

impl IntegralModel {
    /// The smallest `s` dividing `lcm(den A, den B)` that clears both coefficients.
    pub fn new(c: &Curve) -> Result<IntegralModel> {
        let bound = c.a().denom().lcm(c.b().denom());
        let mut scale = bound.clone();
        for p in prime_factors(&bound) {
            loop {
                let (q, r) = scale.div_rem(&p);
                if !r.is_zero() || !integral_at(c, &q) {
                    break;
                }
                scale = q;
            }
        }
        let s2 = Rat::int(&scale * &scale);
        let curve = Curve::new(c.a() * &s2, c.b() * s2.square())?;
        Ok(IntegralModel { scale, curve })
    }

    /// Maps a point of the integral model back to the original curve.
    pub fn to_original(&self, k: &Rat, j: &Rat) -> Point {
        let s = Rat::int(self.scale.clone());
        Point::affine(k / s.square(), j / s.pow(3))
    }
}

fn integral_at(c: &Curve, s: &BigInt) -> bool {
    let s2 = Rat::int(s * s);
    (c.a() * &s2).is_integer() && (c.b() * s2.square()).is_integer()
}

/// Distinct prime factors by trial division below 2^20; a cofactor left over
/// is returned as is, which only costs minimality of the scale.
fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let Some(mut rest) = n.to_u128() else {
        return vec![n.clone()];
    };
    let mut out = Vec::new();
    let mut p = 2u128;
    while p * p <= rest && p < (1 << 20) {
        if rest % p == 0 {
            while rest % p == 0 {
                rest /= p;
            }
            out.push(BigInt::from(p));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        out.push(BigInt::from(rest));
    }
    out
}

/// Inclusive integer interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Range {
    pub lo: i64,
    pub hi: i64,
}

impl Range {
    pub fn new(lo: i64, hi: i64) -> Result<Range> {
        if lo > hi {
            return Err(Error::Parameter(format!("empty range {lo}:{hi}")));
        }
        Ok(Range { lo, hi })
    }
}

impl std::str::FromStr for Range {
    type Err = Error;

    /// `lo:hi`, both inclusive.
    fn from_str(s: &str) -> Result<Range> {
        let bad = || Error::Parse {
            input: s.to_string(),
            reason: "expected lo:hi with integers lo <= hi",
        };
        let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
        let lo = lo.parse().map_err(|_| bad())?;
        let hi = hi.parse().map_err(|_| bad())?;
        Range::new(lo, hi).map_err(|_| bad())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub x_height_min: i64,
    pub x_height_max: i64,
    pub m_height_min: i64,
    pub m_height_max: i64,
    /// Integer `K` window on [`curve_ab`].
    pub k_range: Range,
    /// Integer `U'` window on the integral model of [`w_curve`].
    pub u_range: Range,
}

impl SearchBounds {
    pub fn new(x_height_max: i64, m_height_max: i64, k_range: Range, u_range: Range) -> Result<SearchBounds> {
        SearchBounds {
            x_height_min: 1,
            x_height_max,
            m_height_min: 1,
            m_height_max,
            k_range,
            u_range,
        }
        .validated()
    }

    pub fn validated(self) -> Result<SearchBounds> {
        if self.x_height_min < 1
            || self.m_height_min < 1
            || self.x_height_max < self.x_height_min
            || self.m_height_max < self.m_height_min
            || self.k_range.lo > self.k_range.hi
            || self.u_range.lo > self.u_range.hi
        {
            return Err(Error::Parameter(format!("invalid search bounds {self:?}")));
        }
        Ok(self)
    }

    /// Work units ordered by `(e+f, e, g+h, g)`.
    ///
    /// Only `g > 0` is enumerated: `-g` gives the same curve and negates `y`, so
    /// its hits are sign mirrors of the `g > 0` ones.
    pub fn units(&self) -> Vec<TripleParams> {
        let mut xs = Vec::new();
        for e in 1..=self.x_height_max {
            for f in 1..=self.x_height_max {
                if e.max(f) >= self.x_height_min && e.gcd(&f) == 1 {
                    xs.push((e, f));
                }
            }
        }
        let mut ms = Vec::new();
        for g in 1..=self.m_height_max {
            for h in 1..=self.m_height_max {
                if g.max(h) >= self.m_height_min && g.gcd(&h) == 1 {
                    ms.push((g, h));
                }
            }
        }
        xs.sort_by_key(|&(e, f)| (e + f, e));
        ms.sort_by_key(|&(g, h)| (g + h, g));
        xs.iter()
            .flat_map(|&(e, f)| ms.iter().map(move |&(g, h)| (e, f, g, h)))
            .filter_map(|(e, f, g, h)| TripleParams::new(e, f, g, h).ok())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HitClass {
    Full,
    NearMiss5,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchHit {
    pub params: TripleParams,
    /// Point on [`curve_ab`], sign of `J` as used.
    pub k_point: Point,
    /// Point on [`w_curve`] (original rational coordinates), sign of `V` as used.
    pub u_point: Point,
    pub n: Rat,
    pub r: Rat,
    /// `x, y, z, w`.
    pub roots: Vec<Rat>,
    pub pairs: Vec<PairReport>,
    pub class: HitClass,
}

impl SearchHit {
    /// Sorted absolute roots; equal keys describe the same set of squares.
    pub fn key(&self) -> Vec<Rat> {
        let mut k: Vec<Rat> = self.roots.iter().map(Rat::abs).collect();
        k.sort();
        k
    }
}

/// A verified Eulerian triple from the first stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleCandidate {
    pub k_point: Point,
    pub n: Rat,
    pub roots: [Rat; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WCandidate {
    pub u_point: Point,
    pub r: Rat,
    pub w: Rat,
}

fn same_square(a: &Rat, b: &Rat) -> bool {
    a.abs() == b.abs()
}

/// Triples `(x, y, z)` from integer points of [`curve_ab`] with `K` in `k_range`,
/// trying both signs of `J`; repeated `|z|` values are dropped.
pub fn triple_stage(params: &TripleParams, k_range: Range) -> Result<Vec<TripleCandidate>> {
    let Ok(curve) = curve_ab(params) else {
        return Ok(Vec::new());
    };
    let (x, y) = (params.x(), params.y());
    if y.is_zero() || same_square(&x, &y) {
        return Ok(Vec::new());
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut failure = None;
    curve.scan_with(k_range.lo, k_range.hi, |k, j| {
        if k == 0 || j.is_zero() || failure.is_some() {
            return;
        }
        for j in [j.clone(), -&j] {
            let pt = Point::affine(Rat::int(k), j);
            let Ok(n) = n_from_point4(params, &pt) else { continue };
            let Ok(z) = param_t(&x, &n) else { continue };
            if z.is_zero() || same_square(&z, &x) || same_square(&z, &y) || !seen.insert(z.abs()) {
                continue;
            }
            let triple = SquareTuple::new(vec![x.clone(), y.clone(), z.clone()]).expect("three roots");
            if !triple.is_eulerian() {
                failure = Some(Error::Internal(format!(
                    "{params:?} point {pt} gave non-Eulerian triple ({x}, {y}, {z})"
                )));
                return;
            }
            out.push(TripleCandidate {
                k_point: pt,
                n,
                roots: [x.clone(), y.clone(), z],
            });
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Fourth roots `w` from integer points of the integral model of [`w_curve`],
/// with `U'` in `u_range` and both signs of `V`; repeated `|w|` values are dropped.
pub fn w_stage(x: &Rat, y: &Rat, u_range: Range) -> Result<Vec<WCandidate>> {
    let Ok(curve) = w_curve(x, y) else {
        return Ok(Vec::new());
    };
    let model = IntegralModel::new(&curve)?;
    let (x2, y2) = (x.square(), y.square());
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut failure = None;
    model.curve.scan_with(u_range.lo, u_range.hi, |u, v| {
        if v.is_zero() || failure.is_some() {
            return;
        }
        for v in [v.clone(), -&v] {
            let pt = model.to_original(&Rat::int(u), &v);
            let Ok(r) = r_from_point(x, y, &pt) else { continue };
            let Ok(w) = param_t(x, &r) else { continue };
            if w.is_zero() || same_square(&w, x) || same_square(&w, y) || !seen.insert(w.abs()) {
                continue;
            }
            let w2 = w.square();
            if !pair_val(&x2, &w2).is_square() || !pair_val(&y2, &w2).is_square() {
                failure = Some(Error::Internal(format!(
                    "w-curve point {pt} for x = {x}, y = {y} gave w = {w} failing its construction"
                )));
                return;
            }
            out.push(WCandidate { u_point: pt, r, w });
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// All Full and NearMiss5 hits of one work unit, in `(K, U)` order.
pub fn process_unit(params: &TripleParams, bounds: &SearchBounds) -> Result<Vec<SearchHit>> {
    let triples = triple_stage(params, bounds.k_range)?;
    if triples.is_empty() {
        return Ok(Vec::new());
    }
    let (x, y) = (params.x(), params.y());
    let ws = w_stage(&x, &y, bounds.u_range)?;
    let mut hits = Vec::new();
    for t in &triples {
        let z = &t.roots[2];
        for wc in &ws {
            if same_square(&wc.w, z) {
                continue;
            }
            let roots = vec![x.clone(), y.clone(), z.clone(), wc.w.clone()];
            let verdict = SquareTuple::new(roots.clone())?.verify();
            let class = match (verdict.status, verdict.square_count()) {
                (Status::Eulerian, 6) => HitClass::Full,
                (Status::NotEulerian, 5) => HitClass::NearMiss5,
                (status, count) => {
                    return Err(Error::Internal(format!(
                        "{params:?}: roots {roots:?} have status {status:?} with {count} squares"
                    )))
                }
            };
            hits.push(SearchHit {
                params: *params,
                k_point: t.k_point.clone(),
                u_point: wc.u_point.clone(),
                n: t.n.clone(),
                r: wc.r.clone(),
                roots,
                pairs: verdict.pairs,
                class,
            });
        }
    }
    Ok(hits)
}

/// Runs every unit in order and removes hits already seen under another parameterization.
pub fn search(bounds: &SearchBounds) -> Result<Vec<SearchHit>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for unit in bounds.units() {
        for hit in process_unit(&unit, bounds)? {
            if seen.insert(hit.key()) {
                out.push(hit);
            }
        }
    }
    Ok(out)
}
