//! Gaussian hypergeometric series over `F_q`.
//!
//! ```text
//! n+1Fn(A_0..A_n; B_1..B_n | x)
//!     = q/(q-1) * sum_chi (A_0 chi choose chi) prod_i (A_i chi choose B_i chi) chi(x)
//! ```
//!
//! The sum over all `q - 1` characters is Galois-stable, so it is extracted
//! as an exact rational. [`TwoF1`] specialises `2F1(phi, phi; eps | x)`,
//! which after squaring the symbols is
//! `1/(q(q-1)) * sum_j J(phi chi_j, conj chi_j)^2 chi_j(x)`.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Zero};

use crate::chars::{self, Character};
use crate::cyclo::{GroupRingElement, Rat};
use crate::ff::{self, FieldCtx, FieldElement};
use crate::{Error, Exec, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypSpec {
    pub top: Vec<Character>,
    pub bottom: Vec<Character>,
    pub x: FieldElement,
}

impl HypSpec {
    pub fn new(top: Vec<Character>, bottom: Vec<Character>, x: FieldElement) -> Result<Self> {
        if top.len() != bottom.len() + 1 {
            return Err(Error::InvalidSpec(format!(
                "{} top and {} bottom parameters",
                top.len(),
                bottom.len()
            )));
        }
        let n = top[0].order();
        if top.iter().chain(&bottom).any(|c| c.order() != n) {
            return Err(Error::InvalidSpec("characters of different fields".into()));
        }
        Ok(HypSpec { top, bottom, x })
    }

    /// `2F1(phi, phi; eps | x)`.
    pub fn phi_phi_eps(ctx: &FieldCtx, x: FieldElement) -> Self {
        let phi = Character::quadratic(ctx);
        HypSpec {
            top: vec![phi, phi],
            bottom: vec![Character::trivial(ctx)],
            x,
        }
    }

    /// `2F1(phi, eps; phi | x)`.
    pub fn phi_eps_phi(ctx: &FieldCtx, x: FieldElement) -> Self {
        let phi = Character::quadratic(ctx);
        HypSpec {
            top: vec![phi, Character::trivial(ctx)],
            bottom: vec![phi],
            x,
        }
    }
}

/// Per-character terms of one series, reusable across arguments.
pub struct HypSeries {
    q: u64,
    terms: Vec<GroupRingElement>,
}

impl HypSeries {
    pub fn new(
        ctx: &FieldCtx,
        top: &[Character],
        bottom: &[Character],
        exec: Exec,
    ) -> Result<Self> {
        let probe = HypSpec::new(top.to_vec(), bottom.to_vec(), ctx.zero())?;
        if top[0].order() as usize != ctx.order() {
            return Err(Error::OrderMismatch(top[0].order() as usize, ctx.order()));
        }
        let oml = chars::one_minus_logs(ctx);
        let q = ctx.q();
        // q * (A choose B) as integer counts: B(-1) J(A, conj B)
        let scaled = |a: Character, b: Character| -> GroupRingElement {
            let s = b.at_minus_one();
            let v: Vec<i64> = chars::jacobi_counts(&oml, a.index(), b.conj().index())
                .into_iter()
                .map(|c| s * c)
                .collect();
            GroupRingElement::from_counts(&v)
        };
        let den = Rat::new(BigInt::one(), BigInt::from(q).pow(probe.top.len() as u32));
        let terms = exec.map(&Character::all(ctx), |&chi| {
            let mut t = scaled(probe.top[0].mul(chi), chi);
            for (a, b) in probe.top[1..].iter().zip(&probe.bottom) {
                t = t.mul(&scaled(a.mul(chi), b.mul(chi))).expect("same order");
            }
            t.scale(&den)
        });
        Ok(HypSeries { q, terms })
    }

    /// The unreduced group-ring value at `x`.
    pub fn eval_element(&self, ctx: &FieldCtx, x: FieldElement) -> GroupRingElement {
        let n = self.terms.len();
        let mut acc = GroupRingElement::zero(n);
        if let Ok(l) = ctx.dlog(x) {
            for (j, t) in self.terms.iter().enumerate() {
                acc.add_shifted(t, (j as u64 * l as u64 % n as u64) as i64)
                    .expect("same order");
            }
        }
        acc.scale(&Rat::new(BigInt::from(self.q), BigInt::from(self.q - 1)))
    }

    pub fn eval(&self, ctx: &FieldCtx, x: FieldElement) -> Result<Rat> {
        self.eval_element(ctx, x).to_rational()
    }
}

/// Generic evaluation of one spec.
pub fn hyp_eval(ctx: &FieldCtx, spec: &HypSpec) -> Result<Rat> {
    HypSeries::new(ctx, &spec.top, &spec.bottom, Exec::Sequential)?.eval(ctx, spec.x)
}

/// Cached `2F1(phi, phi; eps | .)` for one field.
pub struct TwoF1 {
    q: u64,
    /// `J(phi chi_j, conj chi_j)^2` as integer multiplicities.
    squares: Vec<Vec<i64>>,
}

impl TwoF1 {
    pub fn new(ctx: &FieldCtx, exec: Exec) -> Self {
        let n = ctx.order();
        let oml = chars::one_minus_logs(ctx);
        let half = n / 2;
        let squares = exec.map_range(n, |j| {
            let a = ((j + half) % n) as u32;
            let b = ((n - j) % n) as u32;
            let jc = chars::jacobi_counts(&oml, a, b);
            let mut sq = vec![0i64; n];
            for (u, &x) in jc.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (v, &y) in jc.iter().enumerate() {
                    sq[(u + v) % n] += x * y;
                }
            }
            sq
        });
        TwoF1 {
            q: ctx.q(),
            squares,
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn eval(&self, ctx: &FieldCtx, x: FieldElement) -> Rat {
        let n = self.squares.len();
        let Ok(l) = ctx.dlog(x) else {
            return Rat::zero();
        };
        let mut acc = vec![0i64; n];
        for (j, sq) in self.squares.iter().enumerate() {
            let k = (j as u64 * l as u64 % n as u64) as usize;
            for (m, &c) in sq.iter().enumerate() {
                acc[(m + k) % n] += c;
            }
        }
        let v = GroupRingElement::from_counts(&acc)
            .to_rational()
            .expect("full character sums are rational");
        v / Rat::from_integer(BigInt::from(self.q * (self.q - 1)))
    }

    /// Values at every element, in canonical element order.
    pub fn eval_all(&self, ctx: &FieldCtx, exec: Exec) -> Vec<Rat> {
        let xs: Vec<FieldElement> = ctx.elements().collect();
        exec.map(&xs, |&x| self.eval(ctx, x))
    }
}

/// `2F1(lambda)` for one argument.
pub fn two_f_one(ctx: &FieldCtx, lambda: FieldElement) -> Rat {
    TwoF1::new(ctx, Exec::default()).eval(ctx, lambda)
}

/// `x^2 + y^2 = p` with `x` odd and both positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct TwoSquares {
    pub x: u64,
    pub y: u64,
    pub p: u64,
}

/// Hermite-Serret / Cornacchia descent for a prime `p = 1 mod 4`.
pub fn cornacchia(p: u64) -> Result<TwoSquares> {
    if !ff::is_prime(p) || p == 2 {
        return Err(Error::InvalidField(format!("{p} is not an odd prime")));
    }
    if p % 4 != 1 {
        return Err(Error::NoRepresentation(p));
    }
    let ctx = ff::FieldCtx::with_cap(p, 1, p)?;
    let s = ctx.pow(ctx.generator(), (p - 1) / 4).index() as u64;
    let (mut a, mut b) = (p, s);
    while b * b > p {
        (a, b) = (b, a % b);
    }
    let r = b;
    let t = (p - r * r).sqrt();
    assert_eq!(
        r * r + t * t,
        p,
        "descent did not terminate on a representation"
    );
    let (x, y) = if r % 2 == 1 { (r, t) } else { (t, r) };
    Ok(TwoSquares { x, y, p })
}

/// `2x(-1)^((x+y+1)/2) / p` for `x` odd and `y` even, any signs.
pub fn ono_formula(x: i64, y: i64, p: u64) -> Rat {
    let e = (x + y + 1).div_euclid(2);
    let sign = if e.rem_euclid(2) == 0 { 1 } else { -1 };
    Rat::new(BigInt::from(2 * x * sign), BigInt::from(p))
}

/// The value of `2F1(-1)` over `F_p`: [`ono_formula`] at the two-square
/// decomposition for `p = 1 mod 4`, zero for `p = 3 mod 4`.
pub fn ono_value_minus1(p: u64) -> Result<Rat> {
    if !ff::is_prime(p) || p == 2 {
        return Err(Error::InvalidField(format!("{p} is not an odd prime")));
    }
    if p % 4 == 3 {
        return Ok(Rat::zero());
    }
    let ts = cornacchia(p)?;
    Ok(ono_formula(ts.x as i64, ts.y as i64, p))
}
