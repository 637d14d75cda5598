//! Brute-force point counts and birational maps for four curve models:
//!
//! * general Huff `G_{a,b}: x(a y^2 - 1) = y(b x^2 - 1)`, `ab(a-b) != 0`
//! * Huff `H_{a,b}: a x (y^2 - 1) = b y (x^2 - 1)`, `a^2 != b^2`
//! * `E_{a,b}: y^2 = x(x+a)(x+b)`, `a, b != 0`, `a != b`
//! * Edwards `x^2 + y^2 = 1 + d2 x^2 y^2`, `d2 != 0, 1`
//!
//! Both Huff models have three points at infinity, `E_{a,b}` has one. The
//! Edwards count is affine only.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::ff::{FieldCtx, FieldElement};
use crate::{Error, Exec, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Model {
    GeneralHuff,
    Huff,
    Weierstrass,
    Edwards,
}

impl Model {
    pub const ALL: [Model; 4] = [
        Model::GeneralHuff,
        Model::Huff,
        Model::Weierstrass,
        Model::Edwards,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Model::GeneralHuff => "ghuff",
            Model::Huff => "huff",
            Model::Weierstrass => "weier",
            Model::Edwards => "edwards",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown model `{s}`")))
    }
}

fn check_in(ctx: &FieldCtx, xs: &[FieldElement]) -> Result<()> {
    if xs.iter().all(|&x| ctx.contains(x)) {
        Ok(())
    } else {
        Err(Error::ForeignElement)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneralHuffParams {
    pub a: FieldElement,
    pub b: FieldElement,
}

impl GeneralHuffParams {
    pub fn new(ctx: &FieldCtx, a: FieldElement, b: FieldElement) -> Result<Self> {
        check_in(ctx, &[a, b])?;
        if a.is_zero() || b.is_zero() || a == b {
            return Err(Error::InvalidParams(
                "general Huff needs ab(a-b) != 0".into(),
            ));
        }
        Ok(GeneralHuffParams { a, b })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HuffParams {
    pub a: FieldElement,
    pub b: FieldElement,
}

impl HuffParams {
    pub fn new(ctx: &FieldCtx, a: FieldElement, b: FieldElement) -> Result<Self> {
        check_in(ctx, &[a, b])?;
        if a.is_zero() || b.is_zero() || ctx.square(a) == ctx.square(b) {
            return Err(Error::InvalidParams(
                "Huff needs a, b != 0 and a^2 != b^2".into(),
            ));
        }
        Ok(HuffParams { a, b })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeierstrassABParams {
    pub a: FieldElement,
    pub b: FieldElement,
}

impl WeierstrassABParams {
    pub fn new(ctx: &FieldCtx, a: FieldElement, b: FieldElement) -> Result<Self> {
        check_in(ctx, &[a, b])?;
        if a.is_zero() || b.is_zero() || a == b {
            return Err(Error::InvalidParams(
                "y^2 = x(x+a)(x+b) needs a, b != 0 and a != b".into(),
            ));
        }
        Ok(WeierstrassABParams { a, b })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdwardsParams {
    pub d2: FieldElement,
}

impl EdwardsParams {
    pub fn new(ctx: &FieldCtx, d2: FieldElement) -> Result<Self> {
        check_in(ctx, &[d2])?;
        if d2.is_zero() || d2 == ctx.one() {
            return Err(Error::InvalidParams("Edwards needs d2 != 0, 1".into()));
        }
        Ok(EdwardsParams { d2 })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct CurveCount {
    pub affine: u64,
    pub at_infinity: u64,
    pub total: u64,
}

impl CurveCount {
    fn new(affine: u64, at_infinity: u64) -> Self {
        CurveCount {
            affine,
            at_infinity,
            total: affine + at_infinity,
        }
    }
}

fn count_affine(ctx: &FieldCtx, on_curve: impl Fn(FieldElement, FieldElement) -> bool) -> u64 {
    let mut n = 0;
    for x in ctx.elements() {
        for y in ctx.elements() {
            n += u64::from(on_curve(x, y));
        }
    }
    n
}

pub fn count_general_huff(ctx: &FieldCtx, params: GeneralHuffParams) -> CurveCount {
    let GeneralHuffParams { a, b } = params;
    let one = ctx.one();
    let affine = count_affine(ctx, |x, y| {
        let lhs = ctx.mul(x, ctx.sub(ctx.mul(a, ctx.square(y)), one));
        let rhs = ctx.mul(y, ctx.sub(ctx.mul(b, ctx.square(x)), one));
        lhs == rhs
    });
    CurveCount::new(affine, 3)
}

pub fn count_huff(ctx: &FieldCtx, params: HuffParams) -> CurveCount {
    let HuffParams { a, b } = params;
    let one = ctx.one();
    let affine = count_affine(ctx, |x, y| {
        let lhs = ctx.mul(ctx.mul(a, x), ctx.sub(ctx.square(y), one));
        let rhs = ctx.mul(ctx.mul(b, y), ctx.sub(ctx.square(x), one));
        lhs == rhs
    });
    CurveCount::new(affine, 3)
}

/// `#{y : y^2 = v}` indexed by `v`.
fn square_counts(ctx: &FieldCtx) -> Vec<u64> {
    let mut c = vec![0u64; ctx.q() as usize];
    for y in ctx.elements() {
        c[ctx.square(y).index() as usize] += 1;
    }
    c
}

pub fn count_weierstrass(ctx: &FieldCtx, params: WeierstrassABParams) -> CurveCount {
    count_weierstrass_with(ctx, params, &square_counts(ctx))
}

fn count_weierstrass_with(ctx: &FieldCtx, params: WeierstrassABParams, sq: &[u64]) -> CurveCount {
    let WeierstrassABParams { a, b } = params;
    let affine = ctx
        .elements()
        .map(|x| {
            let v = ctx.mul(ctx.mul(x, ctx.add(x, a)), ctx.add(x, b));
            sq[v.index() as usize]
        })
        .sum();
    CurveCount::new(affine, 1)
}

pub fn count_edwards_affine(ctx: &FieldCtx, params: EdwardsParams) -> u64 {
    let one = ctx.one();
    count_affine(ctx, |x, y| {
        let (x2, y2) = (ctx.square(x), ctx.square(y));
        ctx.add(x2, y2) == ctx.add(one, ctx.mul(params.d2, ctx.mul(x2, y2)))
    })
}

/// `sum_{x != 0} phi(b^2 x^4 + (4a - 2b) x^2 + 1)`.
pub fn quartic_character_sum(ctx: &FieldCtx, params: GeneralHuffParams) -> i64 {
    let GeneralHuffParams { a, b } = params;
    let c2 = ctx.sub(ctx.mul(ctx.from_int(4), a), ctx.mul(ctx.from_int(2), b));
    let b2 = ctx.square(b);
    let mut sum = 0;
    for x in ctx.nonzero_elements() {
        let x2 = ctx.square(x);
        let v = ctx.add(
            ctx.add(ctx.mul(b2, ctx.square(x2)), ctx.mul(c2, x2)),
            ctx.one(),
        );
        if !v.is_zero() {
            sum += if ctx.is_square(v) { 1 } else { -1 };
        }
    }
    sum
}

/// General Huff count along the quartic route: three points at infinity,
/// the origin, two points for each `x != 0` where the quartic is a square
/// and one where it vanishes, i.e. `q + 3 + quartic_character_sum`.
pub fn count_general_huff_quartic(ctx: &FieldCtx, params: GeneralHuffParams) -> CurveCount {
    let affine = ctx.q() as i64 + quartic_character_sum(ctx, params);
    CurveCount::new(affine as u64, 3)
}

/// Count on any model from two parameters; Edwards reads `a` as `d2` and
/// ignores `b`.
pub fn count(ctx: &FieldCtx, model: Model, a: FieldElement, b: FieldElement) -> Result<CurveCount> {
    Ok(match model {
        Model::GeneralHuff => count_general_huff(ctx, GeneralHuffParams::new(ctx, a, b)?),
        Model::Huff => count_huff(ctx, HuffParams::new(ctx, a, b)?),
        Model::Weierstrass => count_weierstrass(ctx, WeierstrassABParams::new(ctx, a, b)?),
        Model::Edwards => {
            let n = count_edwards_affine(ctx, EdwardsParams::new(ctx, a)?);
            CurveCount::new(n, 0)
        }
    })
}

/// Counts at every admissible `(a, b)` in canonical order; Edwards runs
/// over `d2` with `b = 0`.
pub fn count_grid(
    ctx: &FieldCtx,
    model: Model,
    exec: Exec,
) -> Vec<(FieldElement, FieldElement, CurveCount)> {
    let pairs: Vec<(FieldElement, FieldElement)> = match model {
        Model::Edwards => ctx.elements().map(|d| (d, ctx.zero())).collect(),
        _ => ctx
            .elements()
            .flat_map(|a| ctx.elements().map(move |b| (a, b)))
            .collect(),
    };
    let sq = square_counts(ctx);
    let out = exec.map(&pairs, |&(a, b)| match model {
        Model::Weierstrass => WeierstrassABParams::new(ctx, a, b)
            .ok()
            .map(|p| count_weierstrass_with(ctx, p, &sq)),
        _ => count(ctx, model, a, b).ok(),
    });
    pairs
        .into_iter()
        .zip(out)
        .filter_map(|((a, b), c)| c.map(|c| (a, b, c)))
        .collect()
}

/// The maps between models.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveMap {
    /// `G_{a,b} -> E_{a,b}`: `u = (bx - ay)/(y - x)`, `v = (b - a)/(y - x)`.
    GeneralHuffToWeierstrass,
    /// `E_{a,b} -> G_{a,b}`: `x = (u + a)/v`, `y = (u + b)/v`.
    WeierstrassToGeneralHuff,
    /// `H_{a,b} -> G_{a^2,b^2}`: `(x, y) -> (x/b, y/a)`.
    HuffToGeneralHuff,
    /// `H_{a,b} -> E_{a^2,b^2} -> Edwards` with `d = (a-b)/(a+b)`:
    /// `(u, v) -> (u(a+b)/v, (u-ab)/(u+ab))`.
    HuffToEdwards,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapReport {
    /// Affine points on the source.
    pub source_points: u64,
    /// Source points with nonvanishing denominators.
    pub mapped: u64,
    /// Source points where a denominator vanishes.
    pub exceptional_source: u64,
    /// Affine target points not hit by the map.
    pub exceptional_target: u64,
    pub injective: bool,
    pub images_on_target: bool,
}

type Point = (FieldElement, FieldElement);

fn affine_points(ctx: &FieldCtx, on: impl Fn(FieldElement, FieldElement) -> bool) -> Vec<Point> {
    ctx.elements()
        .flat_map(|x| ctx.elements().map(move |y| (x, y)))
        .filter(|&(x, y)| on(x, y))
        .collect()
}

fn on_general_huff(
    ctx: &FieldCtx,
    a: FieldElement,
    b: FieldElement,
) -> impl Fn(FieldElement, FieldElement) -> bool + '_ {
    move |x, y| {
        let one = ctx.one();
        ctx.mul(x, ctx.sub(ctx.mul(a, ctx.square(y)), one))
            == ctx.mul(y, ctx.sub(ctx.mul(b, ctx.square(x)), one))
    }
}

fn on_weierstrass(
    ctx: &FieldCtx,
    a: FieldElement,
    b: FieldElement,
) -> impl Fn(FieldElement, FieldElement) -> bool + '_ {
    move |u, v| ctx.square(v) == ctx.mul(ctx.mul(u, ctx.add(u, a)), ctx.add(u, b))
}

fn on_huff(
    ctx: &FieldCtx,
    a: FieldElement,
    b: FieldElement,
) -> impl Fn(FieldElement, FieldElement) -> bool + '_ {
    move |x, y| {
        let one = ctx.one();
        ctx.mul(ctx.mul(a, x), ctx.sub(ctx.square(y), one))
            == ctx.mul(ctx.mul(b, y), ctx.sub(ctx.square(x), one))
    }
}

fn on_edwards(
    ctx: &FieldCtx,
    d2: FieldElement,
) -> impl Fn(FieldElement, FieldElement) -> bool + '_ {
    move |x, y| {
        let (x2, y2) = (ctx.square(x), ctx.square(y));
        ctx.add(x2, y2) == ctx.add(ctx.one(), ctx.mul(d2, ctx.mul(x2, y2)))
    }
}

/// Edwards `d2 = ((a-b)/(a+b))^2` for the Huff curve `H_{a,b}`.
pub fn huff_edwards_d2(ctx: &FieldCtx, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
    let s = ctx.add(a, b);
    if s.is_zero() {
        return Err(Error::InvalidParams(
            "a + b = 0, so d = (a-b)/(a+b) is undefined".into(),
        ));
    }
    Ok(ctx.square(ctx.div(ctx.sub(a, b), s)?))
}

/// Applies `map` to every affine source point and checks the images.
pub fn map_points(
    ctx: &FieldCtx,
    map: CurveMap,
    a: FieldElement,
    b: FieldElement,
) -> Result<MapReport> {
    let (source, target, images): (Vec<Point>, Vec<Point>, Vec<Option<Point>>) = match map {
        CurveMap::GeneralHuffToWeierstrass => {
            GeneralHuffParams::new(ctx, a, b)?;
            let src = affine_points(ctx, on_general_huff(ctx, a, b));
            let tgt = affine_points(ctx, on_weierstrass(ctx, a, b));
            let img = src
                .iter()
                .map(|&(x, y)| {
                    let w = ctx.inv(ctx.sub(y, x)).ok()?;
                    let u = ctx.mul(ctx.sub(ctx.mul(b, x), ctx.mul(a, y)), w);
                    Some((u, ctx.mul(ctx.sub(b, a), w)))
                })
                .collect();
            (src, tgt, img)
        }
        CurveMap::WeierstrassToGeneralHuff => {
            WeierstrassABParams::new(ctx, a, b)?;
            let src = affine_points(ctx, on_weierstrass(ctx, a, b));
            let tgt = affine_points(ctx, on_general_huff(ctx, a, b));
            let img = src
                .iter()
                .map(|&(u, v)| {
                    let w = ctx.inv(v).ok()?;
                    Some((ctx.mul(ctx.add(u, a), w), ctx.mul(ctx.add(u, b), w)))
                })
                .collect();
            (src, tgt, img)
        }
        CurveMap::HuffToGeneralHuff => {
            HuffParams::new(ctx, a, b)?;
            let (a2, b2) = (ctx.square(a), ctx.square(b));
            let src = affine_points(ctx, on_huff(ctx, a, b));
            let tgt = affine_points(ctx, on_general_huff(ctx, a2, b2));
            let (ia, ib) = (ctx.inv(a)?, ctx.inv(b)?);
            let img = src
                .iter()
                .map(|&(x, y)| Some((ctx.mul(x, ib), ctx.mul(y, ia))))
                .collect();
            (src, tgt, img)
        }
        CurveMap::HuffToEdwards => {
            let d2 = huff_edwards_d2(ctx, a, b)?;
            HuffParams::new(ctx, a, b)?;
            let (a2, b2) = (ctx.square(a), ctx.square(b));
            let (ia, ib) = (ctx.inv(a)?, ctx.inv(b)?);
            let (s, ab) = (ctx.add(a, b), ctx.mul(a, b));
            let src = affine_points(ctx, on_huff(ctx, a, b));
            let tgt = affine_points(ctx, on_edwards(ctx, d2));
            let img = src
                .iter()
                .map(|&(x, y)| {
                    let (gx, gy) = (ctx.mul(x, ib), ctx.mul(y, ia));
                    let w = ctx.inv(ctx.sub(gy, gx)).ok()?;
                    let u = ctx.mul(ctx.sub(ctx.mul(b2, gx), ctx.mul(a2, gy)), w);
                    let v = ctx.mul(ctx.sub(b2, a2), w);
                    let ex = ctx.mul(ctx.mul(u, s), ctx.inv(v).ok()?);
                    let ey = ctx.div(ctx.sub(u, ab), ctx.add(u, ab)).ok()?;
                    Some((ex, ey))
                })
                .collect();
            (src, tgt, img)
        }
    };
    let tset: HashSet<Point> = target.iter().copied().collect();
    let hit: Vec<Point> = images.iter().flatten().copied().collect();
    let distinct: HashSet<Point> = hit.iter().copied().collect();
    Ok(MapReport {
        source_points: source.len() as u64,
        mapped: hit.len() as u64,
        exceptional_source: (source.len() - hit.len()) as u64,
        exceptional_target: tset.difference(&distinct).count() as u64,
        injective: distinct.len() == hit.len(),
        images_on_target: hit.iter().all(|p| tset.contains(p)),
    })
}
