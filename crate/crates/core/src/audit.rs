//! Identity audit: a registry of counting and transformation identities and
//! an exact sweep engine.
//!
//! Every identity compares two exact rationals at each point of its domain.
//! The residual is `lhs - rhs`; for counting identities `lhs` is the
//! brute-force count, for `2F1` identities it is the left-hand value as
//! written. Identities tagged [`Provenance::Printed`] are the forms as
//! originally stated and are expected to fail; [`Provenance::Corrected`] forms were
//! re-derived against the counting oracle.

use std::io::Write;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::chars::Character;
use crate::curves::{self, GeneralHuffParams, HuffParams, WeierstrassABParams};
use crate::cyclo::{format_rat, Rat};
use crate::ff::{self, FieldCtx, FieldElement};
use crate::hyp::{self, HypSeries, TwoF1};
use crate::{Error, Exec, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Printed,
    Corrected,
    Greene,
    Ono,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Printed => "printed",
            Provenance::Corrected => "corrected",
            Provenance::Greene => "greene",
            Provenance::Ono => "ono",
        }
    }
}

impl std::str::FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Provenance::Printed,
            Provenance::Corrected,
            Provenance::Greene,
            Provenance::Ono,
        ]
        .into_iter()
        .find(|p| p.name() == s)
        .ok_or_else(|| Error::InvalidSpec(format!("unknown provenance `{s}`")))
    }
}

/// Parameter space of an identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// `(a, b)` with `a, b != 0`, `a != b`.
    DistinctPairs,
    /// `(a, b)` with `a, b != 0`, `a^2 != b^2`.
    HuffPairs,
    /// `lambda` outside `{0, 1}`.
    LambdaNot01,
    /// `lambda != 1`.
    LambdaNot1,
    /// `lambda` outside `{0, 1, -1}`.
    LambdaNot0Pm1,
    /// Edwards `d` outside `{0, 1, -1}`, curve coefficient `d^2`.
    EdwardsD,
    /// Primes `p = 1 mod 4`, every `a` with `a^2 = -1`.
    SqrtMinusOne,
    /// Primes `p = r mod 8` (`r` in the list), every `a` with `a^2` in `{2, 1/2}`.
    SqrtTwo(&'static [u64]),
    /// Primes, `lambda = -1`.
    MinusOne,
}

impl Domain {
    pub fn describe(self) -> String {
        match self {
            Domain::DistinctPairs => "(q,a,b): a,b != 0, a != b".into(),
            Domain::HuffPairs => "(q,a,b): a,b != 0, a^2 != b^2".into(),
            Domain::LambdaNot01 => "(q,lambda): lambda not in {0,1}".into(),
            Domain::LambdaNot1 => "(q,lambda): lambda != 1".into(),
            Domain::LambdaNot0Pm1 => "(q,lambda): lambda not in {0,1,-1}".into(),
            Domain::EdwardsD => "(q,d): d not in {0,1,-1}, coefficient d^2".into(),
            Domain::SqrtMinusOne => "(p,a): p prime, p = 1 mod 4, a^2 = -1".into(),
            Domain::SqrtTwo(rs) => {
                let rs: Vec<String> = rs.iter().map(u64::to_string).collect();
                format!(
                    "(p,a): p prime, p mod 8 in {{{}}}, a^2 in {{2, 1/2}}",
                    rs.join(",")
                )
            }
            Domain::MinusOne => "(p,lambda): p prime, lambda = -1".into(),
        }
    }

    pub fn primes_only(self) -> bool {
        matches!(
            self,
            Domain::SqrtMinusOne | Domain::SqrtTwo(_) | Domain::MinusOne
        )
    }

    fn points(self, ctx: &FieldCtx) -> Vec<Point> {
        let one = ctx.one();
        let m1 = ctx.minus_one();
        let pairs = |ok: &dyn Fn(FieldElement, FieldElement) -> bool| -> Vec<Point> {
            ctx.nonzero_elements()
                .flat_map(|a| ctx.nonzero_elements().map(move |b| (a, b)))
                .filter(|&(a, b)| ok(a, b))
                .map(|(a, b)| Point {
                    a: Some(a),
                    b: Some(b),
                    lambda: None,
                })
                .collect()
        };
        let lambdas = |ok: &dyn Fn(FieldElement) -> bool| -> Vec<Point> {
            ctx.elements()
                .filter(|&l| ok(l))
                .map(Point::lambda)
                .collect()
        };
        let roots = |targets: &[FieldElement]| -> Vec<Point> {
            ctx.nonzero_elements()
                .filter(|&a| targets.contains(&ctx.square(a)))
                .map(|a| Point {
                    a: Some(a),
                    b: None,
                    lambda: None,
                })
                .collect()
        };
        let p = ctx.p();
        match self {
            Domain::DistinctPairs => pairs(&|a, b| a != b),
            Domain::HuffPairs => pairs(&|a, b| ctx.square(a) != ctx.square(b)),
            Domain::LambdaNot01 => lambdas(&|l| !l.is_zero() && l != one),
            Domain::LambdaNot1 => lambdas(&|l| l != one),
            Domain::LambdaNot0Pm1 | Domain::EdwardsD => {
                lambdas(&|l| !l.is_zero() && l != one && l != m1)
            }
            Domain::SqrtMinusOne if p % 4 == 1 => roots(&[m1]),
            Domain::SqrtTwo(rs) if rs.contains(&(p % 8)) => {
                let two = ctx.from_int(2);
                roots(&[two, ctx.inv(two).expect("2 != 0")])
            }
            Domain::MinusOne => vec![Point::lambda(m1)],
            Domain::SqrtMinusOne | Domain::SqrtTwo(_) => Vec::new(),
        }
    }
}

/// One parameter point; unused coordinates are `None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Point {
    pub a: Option<FieldElement>,
    pub b: Option<FieldElement>,
    pub lambda: Option<FieldElement>,
}

impl Point {
    fn lambda(l: FieldElement) -> Self {
        Point {
            a: None,
            b: None,
            lambda: Some(l),
        }
    }

    fn ab(self) -> (FieldElement, FieldElement) {
        (self.a.expect("pair domain"), self.b.expect("pair domain"))
    }

    fn l(self) -> FieldElement {
        self.lambda.expect("lambda domain")
    }
}

/// Per-field data shared by all identities in a sweep.
pub struct FieldData {
    ctx: FieldCtx,
    exec: Exec,
    f21: OnceLock<Vec<Rat>>,
    phi_eps_phi: OnceLock<HypSeries>,
}

impl FieldData {
    pub fn new(ctx: FieldCtx, exec: Exec) -> Self {
        FieldData {
            ctx,
            exec,
            f21: OnceLock::new(),
            phi_eps_phi: OnceLock::new(),
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    /// `2F1(phi, phi; eps | x)`.
    pub fn f(&self, x: FieldElement) -> Rat {
        self.f21
            .get_or_init(|| TwoF1::new(&self.ctx, self.exec).eval_all(&self.ctx, self.exec))
            [x.index() as usize]
            .clone()
    }

    /// `2F1(phi, eps; phi | x)` along the generic evaluator.
    pub fn f_phi_eps_phi(&self, x: FieldElement) -> Rat {
        let ctx = &self.ctx;
        let series = self.phi_eps_phi.get_or_init(|| {
            let phi = Character::quadratic(ctx);
            HypSeries::new(ctx, &[phi, Character::trivial(ctx)], &[phi], self.exec)
                .expect("well-formed spec")
        });
        series.eval(ctx, x).expect("Galois-stable parameters")
    }

    fn q(&self) -> Rat {
        int(self.ctx.q() as i64)
    }

    /// `q + k`.
    fn qp(&self, k: i64) -> Rat {
        int(self.ctx.q() as i64 + k)
    }

    fn phi(&self, x: FieldElement) -> Rat {
        int(match self.ctx.log_opt(x) {
            None => 0,
            Some(k) if k % 2 == 0 => 1,
            Some(_) => -1,
        })
    }

    fn div(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.ctx
            .div(x, y)
            .expect("nonzero denominator on this domain")
    }
}

fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

type Eval = fn(&FieldData, Point) -> (Rat, Rat);

pub struct Identity {
    pub id: &'static str,
    pub description: &'static str,
    pub provenance: Provenance,
    pub domain: Domain,
    /// Corrected forms replacing a printed identity.
    pub counterparts: &'static [&'static str],
    pub note: Option<&'static str>,
    eval: Eval,
}

impl Identity {
    /// `(lhs, rhs)` at one point.
    pub fn evaluate(&self, fd: &FieldData, p: Point) -> (Rat, Rat) {
        (self.eval)(fd, p)
    }
}

fn count_g(fd: &FieldData, a: FieldElement, b: FieldElement) -> Rat {
    let c = curves::count_general_huff(&fd.ctx, GeneralHuffParams::new(&fd.ctx, a, b).unwrap());
    int(c.total as i64)
}

fn count_h(fd: &FieldData, a: FieldElement, b: FieldElement) -> Rat {
    let c = curves::count_huff(&fd.ctx, HuffParams::new(&fd.ctx, a, b).unwrap());
    int(c.total as i64)
}

fn count_e(fd: &FieldData, a: FieldElement, b: FieldElement) -> Rat {
    let c = curves::count_weierstrass(&fd.ctx, WeierstrassABParams::new(&fd.ctx, a, b).unwrap());
    int(c.total as i64)
}

fn count_edwards(fd: &FieldData, d: FieldElement) -> Rat {
    let ctx = &fd.ctx;
    let p = curves::EdwardsParams::new(ctx, ctx.square(d)).unwrap();
    int(curves::count_edwards_affine(ctx, p) as i64)
}

/// `q + 2 - 1/(q-1) - (2 + 1/(q-1)) phi(l) + q^2/(q-1) 2F1(l)`, `l = b/a`.
fn printed_general_huff(fd: &FieldData, a: FieldElement, b: FieldElement) -> Rat {
    let q = fd.q();
    let l = fd.div(b, a);
    let r = Rat::one() / fd.qp(-1);
    fd.qp(2) - &r - (int(2) + &r) * fd.phi(l) + &q * &q / fd.qp(-1) * fd.f(l)
}

/// `q + 1 + q phi(a) 2F1(b/a)`.
fn corrected_weierstrass(fd: &FieldData, a: FieldElement, b: FieldElement) -> Rat {
    let q = fd.q();
    fd.qp(1) + &q * fd.phi(a) * fd.f(fd.div(b, a))
}

fn quartic_sum(fd: &FieldData, a: FieldElement, b: FieldElement) -> Rat {
    int(curves::quartic_character_sum(
        &fd.ctx,
        GeneralHuffParams::new(&fd.ctx, a, b).unwrap(),
    ))
}

/// The three arguments of the transformation identities at `lambda`:
/// `((1-l)/(1+l))^2`, `4l/(1+l)^2` and `(1-l)^2/(-4l)`.
fn transforms(fd: &FieldData, l: FieldElement) -> [FieldElement; 3] {
    let ctx = &fd.ctx;
    let one = ctx.one();
    let (m, p) = (ctx.sub(one, l), ctx.add(one, l));
    let four_l = ctx.mul(ctx.from_int(4), l);
    [
        ctx.square(fd.div(m, p)),
        fd.div(four_l, ctx.square(p)),
        fd.div(ctx.square(m), ctx.neg(four_l)),
    ]
}

/// `(q+1)/q^2 + (q-1)/q * x`.
fn printed_transform(fd: &FieldData, x: Rat) -> Rat {
    let q = fd.q();
    fd.qp(1) / (&q * &q) + fd.qp(-1) / &q * x
}

fn lhs_square(fd: &FieldData, l: FieldElement) -> Rat {
    fd.f(fd.ctx.square(l))
}

/// `2F1(4a/(1+a)^2)`.
fn lhs_special(fd: &FieldData, a: FieldElement) -> Rat {
    let ctx = &fd.ctx;
    fd.f(fd.div(
        ctx.mul(ctx.from_int(4), a),
        ctx.square(ctx.add(ctx.one(), a)),
    ))
}

/// `2x(-1)^((x+y+1)/2)/(p-1) - (p+1)/(p(p-1))`.
fn printed_special(p: u64) -> Rat {
    let p = p as i64;
    let ts = hyp::cornacchia(p as u64).expect("p = 1 mod 4");
    let x = ts.x as i64;
    hyp::ono_formula(x, ts.y as i64, p as u64) * int(p) / int(p - 1) - frac(p + 1, p * (p - 1))
}

fn ono(fd: &FieldData) -> Rat {
    hyp::ono_value_minus1(fd.ctx.p()).expect("odd prime")
}

fn phi_m1(fd: &FieldData) -> Rat {
    fd.phi(fd.ctx.minus_one())
}

static REGISTRY: &[Identity] = &[
    Identity {
        id: "T4.1",
        description: "|G_{a,b}| = q+2-1/(q-1)-(2+1/(q-1))phi(b/a)+q^2/(q-1) 2F1(b/a)",
        provenance: Provenance::Printed,
        domain: Domain::DistinctPairs,
        counterparts: &["C1", "C2"],
        note: None,
        eval: |fd, p| {
            let (a, b) = p.ab();
            (count_g(fd, a, b), printed_general_huff(fd, a, b))
        },
    },
    Identity {
        id: "T4.1q",
        description: "|G_{a,b}| = q+4+sum_{x!=0} phi(b^2x^4+(4a-2b)x^2+1)",
        provenance: Provenance::Printed,
        domain: Domain::DistinctPairs,
        counterparts: &["C0q"],
        note: Some("intermediate step of the counting argument"),
        eval: |fd, p| {
            let (a, b) = p.ab();
            (count_g(fd, a, b), fd.qp(4) + quartic_sum(fd, a, b))
        },
    },
    Identity {
        id: "C4.2",
        description: "|H_{a,b}| = q-2/(q-1)+q^2/(q-1) 2F1(b^2/a^2)",
        provenance: Provenance::Printed,
        domain: Domain::HuffPairs,
        counterparts: &["C3"],
        note: None,
        eval: |fd, p| {
            let (a, b) = p.ab();
            let q = fd.q();
            let l = fd.div(fd.ctx.square(b), fd.ctx.square(a));
            let rhs = &q - int(2) / fd.qp(-1) + &q * &q / fd.qp(-1) * fd.f(l);
            (count_h(fd, a, b), rhs)
        },
    },
    Identity {
        id: "C5.1",
        description: "|E_{a,b}| = q+2-1/(q-1)-(2+1/(q-1))phi(b/a)+q^2/(q-1) 2F1(b/a)",
        provenance: Provenance::Printed,
        domain: Domain::DistinctPairs,
        counterparts: &["C1"],
        note: None,
        eval: |fd, p| {
            let (a, b) = p.ab();
            (count_e(fd, a, b), printed_general_huff(fd, a, b))
        },
    },
    Identity {
        id: "T5.2a",
        description: "2F1(l^2) = (q+1)/q^2 + (q-1)/q phi(-1) 2F1(((1-l)/(1+l))^2)",
        provenance: Provenance::Printed,
        domain: Domain::LambdaNot0Pm1,
        counterparts: &["C4a"],
        note: None,
        eval: |fd, p| {
            let [x, _, _] = transforms(fd, p.l());
            (lhs_square(fd, p.l()), printed_transform(fd, phi_m1(fd) * fd.f(x)))
        },
    },
    Identity {
        id: "T5.2b",
        description: "2F1(l^2) = (q+1)/q^2 + (q-1)/q 2F1(4l/(1+l)^2)",
        provenance: Provenance::Printed,
        domain: Domain::LambdaNot0Pm1,
        counterparts: &["C4b"],
        note: None,
        eval: |fd, p| {
            let [_, x, _] = transforms(fd, p.l());
            (lhs_square(fd, p.l()), printed_transform(fd, fd.f(x)))
        },
    },
    Identity {
        id: "T5.2c",
        description: "2F1(l^2) = (q+1)/q^2 + (q-1)/q phi(l) 2F1((1-l)^2/(-4l))",
        provenance: Provenance::Printed,
        domain: Domain::LambdaNot0Pm1,
        counterparts: &["C4c"],
        note: None,
        eval: |fd, p| {
            let [_, _, x] = transforms(fd, p.l());
            (lhs_square(fd, p.l()), printed_transform(fd, fd.phi(p.l()) * fd.f(x)))
        },
    },
    Identity {
        id: "T5.2e",
        description: "affine #{x^2+y^2=1+d^2x^2y^2} = 1+q+q phi(-1) 2F1(d^2)",
        provenance: Provenance::Printed,
        domain: Domain::EdwardsD,
        counterparts: &["C4e"],
        note: Some("Edwards count as quoted; the quoted count includes completed points"),
        eval: |fd, p| {
            let d = p.l();
            let q = fd.q();
            (count_edwards(fd, d), fd.qp(1) + &q * phi_m1(fd) * fd.f(fd.ctx.square(d)))
        },
    },
    Identity {
        id: "T5.3a",
        description: "2F1(4a/(1+a)^2) = 2x(-1)^((x+y+1)/2)/(p-1) - (p+1)/(p(p-1)), a^2 = -1",
        provenance: Provenance::Printed,
        domain: Domain::SqrtMinusOne,
        counterparts: &["C5.3"],
        note: None,
        eval: |fd, p| (lhs_special(fd, p.a.unwrap()), printed_special(fd.ctx.p())),
    },
    Identity {
        id: "T5.3b",
        description: "2F1(4a/(1+a)^2) = -(p+1)/(p(p-1)), a^2 in {2, 1/2}, p = 7 mod 8",
        provenance: Provenance::Printed,
        domain: Domain::SqrtTwo(&[7]),
        counterparts: &["C5.3b"],
        note: None,
        eval: |fd, p| {
            let pr = fd.ctx.p() as i64;
            (lhs_special(fd, p.a.unwrap()), -frac(pr + 1, pr * (pr - 1)))
        },
    },
    Identity {
        id: "T5.3c",
        description: "2F1(4a/(1+a)^2) = 2x(-1)^((x+y+1)/2)/(p-1) - (p+1)/(p(p-1)), a^2 in {2, 1/2}, p = 1 mod 8",
        provenance: Provenance::Printed,
        domain: Domain::SqrtTwo(&[1]),
        counterparts: &["C5.3b"],
        note: Some("evaluated as printed; the p = 1 mod 8 branch repeats the a^2 = -1 value"),
        eval: |fd, p| (lhs_special(fd, p.a.unwrap()), printed_special(fd.ctx.p())),
    },
    Identity {
        id: "C0q",
        description: "|G_{a,b}| = q+3+sum_{x!=0} phi(b^2x^4+(4a-2b)x^2+1)",
        provenance: Provenance::Corrected,
        domain: Domain::DistinctPairs,
        counterparts: &[],
        note: None,
        eval: |fd, p| {
            let (a, b) = p.ab();
            (count_g(fd, a, b), fd.qp(3) + quartic_sum(fd, a, b))
        },
    },
    Identity {
        id: "C1",
        description: "|E_{a,b}| = q+1+q phi(a) 2F1(b/a)",
        provenance: Provenance::Corrected,
        domain: Domain::DistinctPairs,
        counterparts: &[],
        note: None,
        eval: |fd, p| {
            let (a, b) = p.ab();
            (count_e(fd, a, b), corrected_weierstrass(fd, a, b))
        },
    },
    Identity {
        id: "C2",
        description: "|G_{a,b}| = |E_{a,b}|",
        provenance: Provenance::Corrected,
        domain: Domain::DistinctPairs,
        counterparts: &[],
        note: None,
        eval: |fd, p| {
            let (a, b) = p.ab();
            (count_g(fd, a, b), count_e(fd, a, b))
        },
    },
    Identity {
        id: "C3",
        description: "|H_{a,b}| = q+1+q 2F1(b^2/a^2)",
        provenance: Provenance::Corrected,
        domain: Domain::HuffPairs,
        counterparts: &[],
        note: None,
        eval: |fd, p| {
            let (a, b) = p.ab();
            let q = fd.q();
            let l = fd.div(fd.ctx.square(b), fd.ctx.square(a));
            (count_h(fd, a, b), fd.qp(1) + &q * fd.f(l))
        },
    },
    Identity {
        id: "C4a",
        description: "2F1(l^2) = phi(-1) 2F1(((1-l)/(1+l))^2)",
        provenance: Provenance::Corrected,
        domain: Domain::LambdaNot0Pm1,
        counterparts: &[],
        note: None,
        eval: |fd, p| {
            let [x, _, _] = transforms(fd, p.l());
            (lhs_square(fd, p.l()), phi_m1(fd) * fd.f(x))
        },
    },
    Identity {
        id: "C4b",
        description: "2F1(l^2) = 2F1(4l/(1+l)^2)",
        provenance: Provenance::Corrected,
        domain: Domain::LambdaNot0Pm1,
        counterparts: &[],
        note: None,
        eval: |fd, p| {
            let [_, x, _] = transforms(fd, p.l());
            (lhs_square(fd, p.l()), fd.f(x))
        },
    },
    Identity {
        id: "C4c",
        description: "2F1(l^2) = phi(-l) 2F1((1-l)^2/(-4l))",
        provenance: Provenance::Corrected,
        domain: Domain::LambdaNot0Pm1,
        counterparts: &[],
        note: None,
        eval: |fd, p| {
            let [_, _, x] = transforms(fd, p.l());
            (lhs_square(fd, p.l()), fd.phi(fd.ctx.neg(p.l())) * fd.f(x))
        },
    },
    Identity {
        id: "C4e",
        description: "affine #{x^2+y^2=1+d^2x^2y^2} + 4 = 1+q+q phi(-1) 2F1(d^2)",
        provenance: Provenance::Corrected,
        domain: Domain::EdwardsD,
        counterparts: &[],
        note: Some("the +4 accounts for the completed points over the square d^2"),
        eval: |fd, p| {
            let d = p.l();
            let q = fd.q();
            (count_edwards(fd, d) + int(4), fd.qp(1) + &q * phi_m1(fd) * fd.f(fd.ctx.square(d)))
        },
    },
    Identity {
        id: "C5.3",
        description: "2F1(4a/(1+a)^2) = 2x(-1)^((x+y+1)/2)/p, a^2 = -1",
        provenance: Provenance::Corrected,
        domain: Domain::SqrtMinusOne,
        counterparts: &[],
        note: None,
        eval: |fd, p| (lhs_special(fd, p.a.unwrap()), ono(fd)),
    },
    Identity {
        id: "C5.3b",
        description: "2F1(4a/(1+a)^2) = 2F1(a^2), a^2 in {2, 1/2}",
        provenance: Provenance::Corrected,
        domain: Domain::SqrtTwo(&[1, 7]),
        counterparts: &[],
        note: Some("no closed form asserted; records the empirical value 2F1(a^2)"),
        eval: |fd, p| {
            let a = p.a.unwrap();
            (lhs_special(fd, a), fd.f(fd.ctx.square(a)))
        },
    },
    Identity {
        id: "G-reflect",
        description: "2F1(l) = phi(-1) 2F1(1-l)",
        provenance: Provenance::Greene,
        domain: Domain::LambdaNot01,
        counterparts: &[],
        note: None,
        eval: |fd, p| {
            let l = p.l();
            (fd.f(l), phi_m1(fd) * fd.f(fd.ctx.sub(fd.ctx.one(), l)))
        },
    },
    Identity {
        id: "G-ratio",
        description: "2F1(l) = phi(1-l) 2F1(l/(l-1))",
        provenance: Provenance::Greene,
        domain: Domain::LambdaNot1,
        counterparts: &[],
        note: None,
        eval: |fd, p| {
            let ctx = &fd.ctx;
            let l = p.l();
            let rhs = fd.phi(ctx.sub(ctx.one(), l)) * fd.f(fd.div(l, ctx.sub(l, ctx.one())));
            (fd.f(l), rhs)
        },
    },
    Identity {
        id: "G-316",
        description: "2F1(phi,eps;phi | l) = -phi(-1)(1+phi(l))/q",
        provenance: Provenance::Greene,
        domain: Domain::LambdaNot01,
        counterparts: &[],
        note: Some("at l = 1 the series carries an extra phi(-1)"),
        eval: |fd, p| {
            let l = p.l();
            let rhs = -phi_m1(fd) * (int(1) + fd.phi(l)) / fd.q();
            (fd.f_phi_eps_phi(l), rhs)
        },
    },
    Identity {
        id: "O-minus1",
        description: "2F1(-1) = 2x(-1)^((x+y+1)/2)/p (p = 1 mod 4), 0 (p = 3 mod 4)",
        provenance: Provenance::Ono,
        domain: Domain::MinusOne,
        counterparts: &[],
        note: None,
        eval: |fd, p| (fd.f(p.l()), ono(fd)),
    },
];

pub fn registry() -> &'static [Identity] {
    REGISTRY
}

pub fn lookup(id: &str) -> Result<&'static Identity> {
    REGISTRY
        .iter()
        .find(|i| i.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// A coordinate as printed: the integer for prime fields, `c0,c1,...`
/// otherwise.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum Label {
    Int(u64),
    Tuple(String),
}

impl Label {
    fn of(ctx: &FieldCtx, x: FieldElement) -> Self {
        if ctx.is_prime_field() {
            Label::Int(x.index() as u64)
        } else {
            Label::Tuple(ctx.format_element(x))
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::Int(v) => write!(f, "{v}"),
            Label::Tuple(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointRecord {
    pub identity: &'static str,
    pub q: u64,
    pub a: Option<Label>,
    pub b: Option<Label>,
    pub lambda: Option<Label>,
    pub lhs: Rat,
    pub rhs: Rat,
    pub residual: Rat,
    pub pass: bool,
    key: (u64, [u32; 3]),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub identity: &'static str,
    pub provenance: Provenance,
    pub domain: String,
    /// Every evaluated point, sorted by `(q, a, b, lambda)`.
    pub records: Vec<PointRecord>,
    /// Failing points, at most the configured cap.
    pub counterexamples: Vec<PointRecord>,
    pub failures: usize,
    pub truncated: bool,
    pub status: Status,
}

impl IdentityReport {
    pub fn find(
        &self,
        q: u64,
        a: Option<u64>,
        b: Option<u64>,
        lambda: Option<u64>,
    ) -> Option<&PointRecord> {
        let m = |l: &Option<Label>, v: Option<u64>| match (l, v) {
            (_, None) => true,
            (Some(Label::Int(x)), Some(v)) => *x == v,
            _ => false,
        };
        self.records
            .iter()
            .find(|r| r.q == q && m(&r.a, a) && m(&r.b, b) && m(&r.lambda, lambda))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AuditConfig {
    pub exec: Exec,
    pub counterexample_cap: usize,
    pub q_cap: u64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            exec: Exec::default(),
            counterexample_cap: 100,
            q_cap: ff::DEFAULT_Q_CAP,
        }
    }
}

fn field_data(q: u64, cfg: &AuditConfig) -> Result<FieldData> {
    let (p, r) = ff::odd_prime_power(q)
        .ok_or_else(|| Error::OutOfRange(format!("{q} is not an odd prime power")))?;
    if q > cfg.q_cap {
        return Err(Error::OutOfRange(format!(
            "q = {q} exceeds the cap {}",
            cfg.q_cap
        )));
    }
    Ok(FieldData::new(
        FieldCtx::with_cap(p, r, cfg.q_cap)?,
        cfg.exec,
    ))
}

fn evaluate(identity: &'static Identity, fd: &FieldData, exec: Exec) -> Vec<PointRecord> {
    let ctx = fd.ctx();
    if identity.domain.primes_only() && !ctx.is_prime_field() {
        return Vec::new();
    }
    let points = identity.domain.points(ctx);
    exec.map(&points, |&pt| {
        let (lhs, rhs) = identity.evaluate(fd, pt);
        let residual = &lhs - &rhs;
        let idx = |x: Option<FieldElement>| x.map_or(0, |e| e.index() + 1);
        PointRecord {
            identity: identity.id,
            q: ctx.q(),
            a: pt.a.map(|x| Label::of(ctx, x)),
            b: pt.b.map(|x| Label::of(ctx, x)),
            lambda: pt.lambda.map(|x| Label::of(ctx, x)),
            pass: residual.is_zero(),
            lhs,
            rhs,
            residual,
            key: (ctx.q(), [idx(pt.a), idx(pt.b), idx(pt.lambda)]),
        }
    })
}

fn finish(
    identity: &'static Identity,
    mut records: Vec<PointRecord>,
    cfg: &AuditConfig,
) -> IdentityReport {
    records.sort_by_key(|r| r.key);
    let failing: Vec<&PointRecord> = records.iter().filter(|r| !r.pass).collect();
    let failures = failing.len();
    IdentityReport {
        identity: identity.id,
        provenance: identity.provenance,
        domain: identity.domain.describe(),
        counterexamples: failing
            .into_iter()
            .take(cfg.counterexample_cap)
            .cloned()
            .collect(),
        truncated: failures > cfg.counterexample_cap,
        failures,
        status: if failures == 0 {
            Status::Pass
        } else {
            Status::Fail
        },
        records,
    }
}

/// Audits one identity over the given field sizes.
pub fn audit_identity(id: &str, qs: &[u64]) -> Result<IdentityReport> {
    audit_identity_with(id, qs, &AuditConfig::default())
}

pub fn audit_identity_with(id: &str, qs: &[u64], cfg: &AuditConfig) -> Result<IdentityReport> {
    Ok(audit_many(&[lookup(id)?], qs, cfg)?.remove(0))
}

/// Audits several identities, building each field once.
pub fn audit_many(
    ids: &[&'static Identity],
    qs: &[u64],
    cfg: &AuditConfig,
) -> Result<Vec<IdentityReport>> {
    let mut qs = qs.to_vec();
    qs.sort_unstable();
    qs.dedup();
    let mut per_id: Vec<Vec<PointRecord>> = vec![Vec::new(); ids.len()];
    for &q in &qs {
        let fd = field_data(q, cfg)?;
        for (slot, identity) in per_id.iter_mut().zip(ids) {
            slot.extend(evaluate(identity, &fd, cfg.exec));
        }
    }
    Ok(ids
        .iter()
        .zip(per_id)
        .map(|(i, r)| finish(i, r, cfg))
        .collect())
}

/// Every registry identity (optionally one provenance) over all odd prime
/// powers `q <= q_max`.
pub fn sweep(q_max: u64, include: Option<Provenance>) -> Result<Vec<IdentityReport>> {
    sweep_with(q_max, include, &AuditConfig::default())
}

pub fn sweep_with(
    q_max: u64,
    include: Option<Provenance>,
    cfg: &AuditConfig,
) -> Result<Vec<IdentityReport>> {
    if q_max > cfg.q_cap {
        return Err(Error::OutOfRange(format!(
            "q_max = {q_max} exceeds the cap {}",
            cfg.q_cap
        )));
    }
    let ids: Vec<&'static Identity> = REGISTRY
        .iter()
        .filter(|i| include.is_none_or(|p| i.provenance == p))
        .collect();
    audit_many(&ids, &ff::odd_prime_powers(q_max), cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Serialize)]
struct JsonPoint<'a> {
    identity: &'a str,
    q: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<&'a Label>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<&'a Label>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<&'a Label>,
    lhs: String,
    rhs: String,
    residual: String,
    pass: bool,
}

#[derive(Serialize)]
struct JsonSummary<'a> {
    identity: &'a str,
    summary: bool,
    provenance: Provenance,
    domain: &'a str,
    points: usize,
    failures: usize,
    truncated: bool,
    status: Status,
}

impl<'a> From<&'a PointRecord> for JsonPoint<'a> {
    fn from(r: &'a PointRecord) -> Self {
        JsonPoint {
            identity: r.identity,
            q: r.q,
            a: r.a.as_ref(),
            b: r.b.as_ref(),
            lambda: r.lambda.as_ref(),
            lhs: format_rat(&r.lhs),
            rhs: format_rat(&r.rhs),
            residual: format_rat(&r.residual),
            pass: r.pass,
        }
    }
}

/// Writes one record per point followed by a summary record per identity.
pub fn emit<W: Write>(reports: &[IdentityReport], format: Format, out: &mut W) -> Result<()> {
    let io = |e: std::io::Error| Error::Output(e.to_string());
    match format {
        Format::Json => {
            let mut lines = Vec::new();
            for rep in reports {
                for r in &rep.records {
                    lines.push(
                        serde_json::to_string(&JsonPoint::from(r))
                            .map_err(|e| Error::Output(e.to_string()))?,
                    );
                }
                let s = JsonSummary {
                    identity: rep.identity,
                    summary: true,
                    provenance: rep.provenance,
                    domain: &rep.domain,
                    points: rep.records.len(),
                    failures: rep.failures,
                    truncated: rep.truncated,
                    status: rep.status,
                };
                lines.push(serde_json::to_string(&s).map_err(|e| Error::Output(e.to_string()))?);
            }
            if lines.is_empty() {
                writeln!(out, "[]").map_err(io)?;
            } else {
                writeln!(out, "[\n{}\n]", lines.join(",\n")).map_err(io)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let csv_err = |e: csv::Error| Error::Output(e.to_string());
            w.write_record([
                "identity", "q", "a", "b", "lambda", "lhs", "rhs", "residual", "pass",
            ])
            .map_err(csv_err)?;
            let s = |l: &Option<Label>| l.as_ref().map(Label::to_string).unwrap_or_default();
            for rep in reports {
                for r in &rep.records {
                    w.write_record([
                        r.identity.to_string(),
                        r.q.to_string(),
                        s(&r.a),
                        s(&r.b),
                        s(&r.lambda),
                        format_rat(&r.lhs),
                        format_rat(&r.rhs),
                        format_rat(&r.residual),
                        r.pass.to_string(),
                    ])
                    .map_err(csv_err)?;
                }
                let e = String::new;
                w.write_record([
                    rep.identity.to_string(),
                    e(),
                    e(),
                    e(),
                    e(),
                    e(),
                    e(),
                    e(),
                    rep.status.as_str().to_string(),
                ])
                .map_err(csv_err)?;
            }
            w.flush().map_err(io)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        frac(n, d)
    }

    #[test]
    fn registry_shape() {
        assert!(registry().len() >= 15);
        for i in registry() {
            if i.provenance == Provenance::Printed {
                assert!(!i.counterparts.is_empty() || i.note.is_some(), "{}", i.id);
                for c in i.counterparts {
                    assert_eq!(lookup(c).unwrap().provenance, Provenance::Corrected);
                }
            }
        }
        let mut ids: Vec<_> = registry().iter().map(|i| i.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), registry().len());
        assert!(matches!(lookup("T9.9"), Err(Error::UnknownIdentity(_))));
    }

    #[test]
    fn printed_general_huff_residuals_at_q5() {
        let rep = audit_identity("T4.1", &[5]).unwrap();
        assert_eq!(rep.status, Status::Fail);
        let p = rep.find(5, Some(1), Some(4), None).unwrap();
        assert_eq!(
            (p.lhs.clone(), p.rhs.clone(), p.residual.clone()),
            (r(8, 1), r(7, 1), r(1, 1))
        );
        let p = rep.find(5, Some(1), Some(2), None).unwrap();
        assert_eq!((p.rhs.clone(), p.residual.clone()), (r(23, 2), r(-7, 2)));
    }

    #[test]
    fn printed_transformation_residual_at_q13() {
        let rep = audit_identity("T5.2b", &[13]).unwrap();
        let p = rep.find(13, None, None, Some(2)).unwrap();
        assert_eq!(p.lhs, r(2, 13));
        assert_eq!(p.rhs, r(38, 169));
        assert_eq!(p.residual, r(-12, 169));
        assert!(
            audit_identity("C4b", &[13])
                .unwrap()
                .find(13, None, None, Some(2))
                .unwrap()
                .pass
        );
    }

    #[test]
    fn corrected_pass_on_small_fields() {
        let qs = [3, 5, 7, 9, 11, 13];
        for rep in sweep(13, Some(Provenance::Corrected)).unwrap() {
            assert_eq!(rep.status, Status::Pass, "{}", rep.identity);
        }
        assert!(audit_identity("C1", &qs)
            .unwrap()
            .records
            .iter()
            .all(|r| r.pass));
    }

    #[test]
    fn sweeps_are_deterministic_across_modes() {
        let seq = AuditConfig {
            exec: Exec::Sequential,
            ..AuditConfig::default()
        };
        let par = AuditConfig {
            exec: Exec::Parallel,
            ..AuditConfig::default()
        };
        let mut a = Vec::new();
        let mut b = Vec::new();
        emit(&sweep_with(9, None, &seq).unwrap(), Format::Json, &mut a).unwrap();
        emit(&sweep_with(9, None, &par).unwrap(), Format::Json, &mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn counterexample_cap() {
        let cfg = AuditConfig {
            counterexample_cap: 3,
            ..AuditConfig::default()
        };
        let rep = audit_identity_with("T4.1", &[7, 11], &cfg).unwrap();
        assert_eq!(rep.counterexamples.len(), 3);
        assert!(rep.truncated);
        assert!(rep.failures > 3);
    }

    #[test]
    fn bad_field_sizes() {
        assert!(matches!(
            audit_identity("C1", &[15]),
            Err(Error::OutOfRange(_))
        ));
        let cfg = AuditConfig {
            q_cap: 10,
            ..AuditConfig::default()
        };
        assert!(audit_identity_with("C1", &[11], &cfg).is_err());
    }

    #[test]
    fn prime_only_identities_skip_extensions() {
        let rep = audit_identity("O-minus1", &[9, 25, 13]).unwrap();
        assert_eq!(rep.records.len(), 1);
        assert_eq!(rep.records[0].q, 13);
    }

    #[test]
    fn emit_formats() {
        let rep = audit_identity("T4.1", &[5]).unwrap();
        let mut out = Vec::new();
        emit(std::slice::from_ref(&rep), Format::Json, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains(
            r#"{"identity":"T4.1","q":5,"a":1,"b":4,"lhs":"8/1","rhs":"7/1","residual":"1/1","pass":false}"#
        ));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v.as_array().unwrap().len(), rep.records.len() + 1);

        let mut csv = Vec::new();
        emit(&[rep], Format::Csv, &mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert!(csv.starts_with("identity,q,a,b,lambda,lhs,rhs,residual,pass\n"));
        assert!(csv.contains("T4.1,5,1,4,,8/1,7/1,1/1,false\n"));
        assert!(csv.trim_end().ends_with("T4.1,,,,,,,,FAIL"));

        let mut empty = Vec::new();
        emit(&[], Format::Json, &mut empty).unwrap();
        assert_eq!(empty, b"[]\n");
        let mut empty = Vec::new();
        emit(&[], Format::Csv, &mut empty).unwrap();
        assert_eq!(empty, b"identity,q,a,b,lambda,lhs,rhs,residual,pass\n");
        assert!(matches!(
            "xml".parse::<Format>(),
            Err(Error::UnknownFormat(_))
        ));
    }

    #[test]
    fn extension_labels_are_tuples() {
        let rep = audit_identity("C4b", &[9]).unwrap();
        assert!(rep
            .records
            .iter()
            .all(|r| matches!(r.lambda, Some(Label::Tuple(_)))));
    }
}
