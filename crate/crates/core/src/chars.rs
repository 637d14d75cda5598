//! Multiplicative characters of `F_q`, Jacobi sums and Greene's binomial
//! symbol.
//!
//! `chi_j(gen^k) = zeta^(j k)` with `zeta` a primitive `(q-1)`-th root of
//! unity, and `chi_j(0) = 0` for every `j`, the trivial character included.
//! Values live in the group ring `Q[Z_{q-1}]`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cyclo::GroupRingElement;
use crate::ff::{FieldCtx, FieldElement};
use crate::{Error, Exec, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    index: u32,
    order: u32,
}

impl Character {
    /// `chi_j`, with `j` taken mod `q - 1`.
    pub fn new(ctx: &FieldCtx, j: i64) -> Self {
        let n = ctx.order() as i64;
        Character {
            index: j.rem_euclid(n) as u32,
            order: n as u32,
        }
    }

    /// `epsilon`.
    pub fn trivial(ctx: &FieldCtx) -> Self {
        Self::new(ctx, 0)
    }

    /// `phi`, the character of order 2.
    pub fn quadratic(ctx: &FieldCtx) -> Self {
        Self::new(ctx, ctx.order() as i64 / 2)
    }

    pub fn all(ctx: &FieldCtx) -> Vec<Self> {
        (0..ctx.order() as i64).map(|j| Self::new(ctx, j)).collect()
    }

    pub fn index(self) -> u32 {
        self.index
    }

    /// `q - 1` of the owning field.
    pub fn order(self) -> u32 {
        self.order
    }

    pub fn is_trivial(self) -> bool {
        self.index == 0
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Self) -> Self {
        assert_eq!(self.order, other.order, "characters of different fields");
        Character {
            index: (self.index + other.index) % self.order,
            order: self.order,
        }
    }

    pub fn conj(self) -> Self {
        Character {
            index: (self.order - self.index) % self.order,
            order: self.order,
        }
    }

    pub fn pow(self, e: i64) -> Self {
        let n = self.order as i64;
        let j = (self.index as i64 * e.rem_euclid(n)).rem_euclid(n);
        Character {
            index: j as u32,
            order: self.order,
        }
    }

    /// `chi(-1)`; `-1 = gen^((q-1)/2)` so this is `(-1)^j`.
    pub fn at_minus_one(self) -> i64 {
        if self.index.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Exponent `e` with `chi(x) = zeta^e`, `None` at zero.
    pub fn exponent_at(self, ctx: &FieldCtx, x: FieldElement) -> Option<u32> {
        let k = ctx.log_opt(x)? as u64;
        Some((self.index as u64 * k % self.order as u64) as u32)
    }

    pub fn eval(self, ctx: &FieldCtx, x: FieldElement) -> GroupRingElement {
        match self.exponent_at(ctx, x) {
            Some(e) => GroupRingElement::unit(self.order as usize, e as i64),
            None => GroupRingElement::zero(self.order as usize),
        }
    }

    fn check(self, ctx: &FieldCtx) -> Result<()> {
        if self.order as usize == ctx.order() {
            Ok(())
        } else {
            Err(Error::OrderMismatch(self.order as usize, ctx.order()))
        }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi_{}", self.index)
    }
}

/// `delta(x)`: 1 at zero, else 0.
pub fn delta_elem(x: FieldElement) -> i64 {
    i64::from(x.is_zero())
}

/// `delta(A)`: 1 for the trivial character, else 0.
pub fn delta_char(a: Character) -> i64 {
    i64::from(a.is_trivial())
}

/// `phi(-1)`.
pub fn phi_at_minus1(ctx: &FieldCtx) -> i32 {
    Character::quadratic(ctx).at_minus_one() as i32
}

/// `log(1 - gen^k)` for each `k`, `None` at `k = 0`.
pub(crate) fn one_minus_logs(ctx: &FieldCtx) -> Vec<Option<u32>> {
    let n = ctx.order() as u32;
    (0..n).map(|k| ctx.zech((k + n / 2) % n)).collect()
}

/// Multiplicities of `J(chi_a, chi_b)`: `out[m]` counts the `x` with
/// `chi_a(x) chi_b(1 - x) = zeta^m`.
pub(crate) fn jacobi_counts(oml: &[Option<u32>], a: u32, b: u32) -> Vec<i64> {
    let n = oml.len() as u64;
    let mut out = vec![0i64; oml.len()];
    for (k, l) in oml.iter().enumerate() {
        if let Some(l) = *l {
            out[((a as u64 * k as u64 + b as u64 * l as u64) % n) as usize] += 1;
        }
    }
    out
}

/// `J(A, B) = sum_x A(x) B(1 - x)`.
pub fn jacobi(ctx: &FieldCtx, a: Character, b: Character) -> Result<GroupRingElement> {
    a.check(ctx)?;
    b.check(ctx)?;
    let oml = one_minus_logs(ctx);
    Ok(GroupRingElement::from_counts(&jacobi_counts(
        &oml, a.index, b.index,
    )))
}

/// `(A choose B) = B(-1)/q * J(A, conj B)`.
pub fn binom(ctx: &FieldCtx, a: Character, b: Character) -> Result<GroupRingElement> {
    let j = jacobi(ctx, a, b.conj())?;
    Ok(j.scale(&BigRational::new(
        BigInt::from(b.at_minus_one()),
        BigInt::from(ctx.q()),
    )))
}

/// All `J(chi_a, chi_b)` of one field as integer multiplicity vectors.
///
/// Memory is `(q-1)^3` words, so this is meant for the small fields the
/// symbol identities are checked over.
pub struct JacobiTable {
    n: usize,
    q: u64,
    counts: Vec<i64>,
}

impl JacobiTable {
    pub fn new(ctx: &FieldCtx, exec: Exec) -> Self {
        let n = ctx.order();
        let oml = one_minus_logs(ctx);
        let rows = exec.map_range(n, |a| {
            let mut row = Vec::with_capacity(n * n);
            for b in 0..n {
                row.extend(jacobi_counts(&oml, a as u32, b as u32));
            }
            row
        });
        JacobiTable {
            n,
            q: ctx.q(),
            counts: rows.concat(),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Raw multiplicities of `J(chi_a, chi_b)`.
    pub fn counts(&self, a: Character, b: Character) -> &[i64] {
        let (a, b) = (a.index as usize, b.index as usize);
        let start = (a * self.n + b) * self.n;
        &self.counts[start..start + self.n]
    }

    pub fn jacobi(&self, a: Character, b: Character) -> GroupRingElement {
        GroupRingElement::from_counts(self.counts(a, b))
    }

    /// `q * (A choose B)` as an integer vector.
    pub fn binom_scaled(&self, a: Character, b: Character) -> Vec<i64> {
        let s = b.at_minus_one();
        self.counts(a, b.conj()).iter().map(|c| s * c).collect()
    }

    pub fn binom(&self, a: Character, b: Character) -> GroupRingElement {
        GroupRingElement::from_counts(&self.binom_scaled(a, b))
            .scale(&BigRational::new(BigInt::from(1), BigInt::from(self.q)))
    }
}

/// Executable versions of the standard identities satisfied by characters,
/// Jacobi sums and binomial symbols.
///
/// Each law is checked at every point of its domain over one field. Both
/// sides are cleared of denominators and compared as integer vectors modulo
/// the cyclotomic polynomial, so equality is exact. Identities that involve
/// the inverse of a symbol are checked multiplied through by it.
pub mod laws {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::{Character, JacobiTable};
    use crate::cyclo::GroupRingElement;
    use crate::ff::FieldCtx;
    use crate::Exec;

    #[derive(Clone, Debug, PartialEq, Eq)]
    pub struct LawCheck {
        pub name: &'static str,
        pub cases: usize,
        pub failures: usize,
        /// Description of the first failing case, if any.
        pub first_failure: Option<String>,
    }

    impl LawCheck {
        pub fn holds(&self) -> bool {
            self.failures == 0
        }
    }

    type Case = (bool, String);

    fn collect(name: &'static str, rows: Vec<Vec<Case>>) -> LawCheck {
        let mut check = LawCheck {
            name,
            cases: 0,
            failures: 0,
            first_failure: None,
        };
        for (ok, label) in rows.into_iter().flatten() {
            check.cases += 1;
            if !ok {
                check.failures += 1;
                check.first_failure.get_or_insert(label);
            }
        }
        check
    }

    fn vanishes(v: &[i64]) -> bool {
        v.iter().all(|&c| c == 0) || GroupRingElement::from_counts(v).is_zero()
    }

    fn same(a: &[i64], b: &[i64]) -> bool {
        a == b || vanishes(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
    }

    fn conv(a: &[i64], b: &[i64]) -> Vec<i64> {
        let n = a.len();
        let mut out = vec![0i64; n];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[(i + j) % n] += x * y;
            }
        }
        out
    }

    /// `acc += s * v * zeta^k`.
    fn add_shifted(acc: &mut [i64], v: &[i64], k: usize, s: i64) {
        let n = acc.len();
        for (m, &c) in v.iter().enumerate() {
            acc[(m + k) % n] += s * c;
        }
    }

    fn shifted(v: &[i64], k: usize) -> Vec<i64> {
        let mut out = vec![0; v.len()];
        add_shifted(&mut out, v, k, 1);
        out
    }

    fn chars(ctx: &FieldCtx) -> Vec<Character> {
        Character::all(ctx)
    }

    /// `A(1+x) = delta(x) + q/(q-1) sum_chi (A choose chi) chi(x)`.
    pub fn delta_expansion(ctx: &FieldCtx, t: &JacobiTable, exec: Exec) -> LawCheck {
        let n = ctx.order();
        let cs = chars(ctx);
        let rows = exec.map(&cs, |&a| {
            ctx.elements()
                .map(|x| {
                    let mut lhs = vec![0i64; n];
                    if let Some(e) = a.exponent_at(ctx, ctx.add(ctx.one(), x)) {
                        lhs[e as usize] += n as i64;
                    }
                    lhs[0] -= n as i64 * super::delta_elem(x);
                    let mut rhs = vec![0i64; n];
                    for &chi in &cs {
                        if let Some(e) = chi.exponent_at(ctx, x) {
                            add_shifted(&mut rhs, &t.binom_scaled(a, chi), e as usize, 1);
                        }
                    }
                    (
                        same(&lhs, &rhs),
                        format!("A={a}, x={}", ctx.format_element(x)),
                    )
                })
                .collect()
        });
        collect("delta-expansion", rows)
    }

    /// `conj(A)(1-x) = delta(x) + q/(q-1) sum_chi (A chi choose chi) chi(x)`.
    pub fn conjugate_expansion(ctx: &FieldCtx, t: &JacobiTable, exec: Exec) -> LawCheck {
        let n = ctx.order();
        let cs = chars(ctx);
        let rows = exec.map(&cs, |&a| {
            ctx.elements()
                .map(|x| {
                    let mut lhs = vec![0i64; n];
                    if let Some(e) = a.conj().exponent_at(ctx, ctx.sub(ctx.one(), x)) {
                        lhs[e as usize] += n as i64;
                    }
                    lhs[0] -= n as i64 * super::delta_elem(x);
                    let mut rhs = vec![0i64; n];
                    for &chi in &cs {
                        if let Some(e) = chi.exponent_at(ctx, x) {
                            add_shifted(&mut rhs, &t.binom_scaled(a.mul(chi), chi), e as usize, 1);
                        }
                    }
                    (
                        same(&lhs, &rhs),
                        format!("A={a}, x={}", ctx.format_element(x)),
                    )
                })
                .collect()
        });
        collect("conjugate-expansion", rows)
    }

    fn pairwise<F>(ctx: &FieldCtx, exec: Exec, name: &'static str, f: F) -> LawCheck
    where
        F: Fn(Character, Character) -> bool + Sync + Send,
    {
        let cs = chars(ctx);
        let rows = exec.map(&cs, |&a| {
            cs.iter()
                .map(|&b| (f(a, b), format!("A={a}, B={b}")))
                .collect()
        });
        collect(name, rows)
    }

    /// `(A choose B) = (A choose A conj(B))`.
    pub fn complement_symmetry(ctx: &FieldCtx, t: &JacobiTable, exec: Exec) -> LawCheck {
        pairwise(ctx, exec, "complement-symmetry", |a, b| {
            same(&t.binom_scaled(a, b), &t.binom_scaled(a, a.mul(b.conj())))
        })
    }

    /// `(A choose B) = (B conj(A) choose B) B(-1)`.
    pub fn reflection_symmetry(ctx: &FieldCtx, t: &JacobiTable, exec: Exec) -> LawCheck {
        pairwise(ctx, exec, "reflection-symmetry", |a, b| {
            let rhs: Vec<i64> = t
                .binom_scaled(b.mul(a.conj()), b)
                .iter()
                .map(|c| c * b.at_minus_one())
                .collect();
            same(&t.binom_scaled(a, b), &rhs)
        })
    }

    /// `(A choose eps) = (A choose A) = -1/q + (q-1)/q delta(A)`.
    pub fn trivial_binomials(ctx: &FieldCtx, t: &JacobiTable, _exec: Exec) -> LawCheck {
        let n = ctx.order();
        let eps = Character::trivial(ctx);
        let rows = chars(ctx)
            .into_iter()
            .map(|a| {
                let mut want = vec![0i64; n];
                want[0] = -1 + (ctx.q() as i64 - 1) * super::delta_char(a);
                let ok = same(&t.binom_scaled(a, eps), &want) && same(&t.binom_scaled(a, a), &want);
                vec![(ok, format!("A={a}"))]
            })
            .collect();
        collect("trivial-binomials", rows)
    }

    fn log4(ctx: &FieldCtx) -> u32 {
        ctx.dlog(ctx.from_int(4))
            .expect("4 is nonzero in odd characteristic")
    }

    /// `(B^2 chi^2 choose chi)(phi choose phi B)
    ///   = (phi B chi choose chi)(B chi choose B^2 chi) B chi(4)`.
    pub fn duplication_product(ctx: &FieldCtx, t: &JacobiTable, exec: Exec) -> LawCheck {
        let phi = Character::quadratic(ctx);
        let l4 = log4(ctx) as usize;
        let n = ctx.order();
        pairwise(ctx, exec, "duplication-product", |b, chi| {
            let b2c = b.pow(2).mul(chi);
            let lhs = conv(
                &t.binom_scaled(b2c.mul(chi), chi),
                &t.binom_scaled(phi, phi.mul(b)),
            );
            let rhs = conv(
                &t.binom_scaled(phi.mul(b).mul(chi), chi),
                &t.binom_scaled(b.mul(chi), b2c),
            );
            let k = b.mul(chi).index() as usize * l4 % n;
            same(&lhs, &shifted(&rhs, k))
        })
    }

    /// `(A^2 choose A B)(phi choose B) = (A choose B)(phi A choose A B) A(4)`.
    pub fn square_product(ctx: &FieldCtx, t: &JacobiTable, exec: Exec) -> LawCheck {
        let phi = Character::quadratic(ctx);
        let l4 = log4(ctx) as usize;
        let n = ctx.order();
        pairwise(ctx, exec, "square-product", |a, b| {
            let lhs = conv(&t.binom_scaled(a.pow(2), a.mul(b)), &t.binom_scaled(phi, b));
            let rhs = conv(&t.binom_scaled(a, b), &t.binom_scaled(phi.mul(a), a.mul(b)));
            let k = a.index() as usize * l4 % n;
            same(&lhs, &shifted(&rhs, k))
        })
    }

    /// `sum_x phi(x) f(x) = sum_x f(x^2) - sum_x f(x)` for seeded random
    /// group-ring valued `f`.
    pub fn quadratic_twist_sum(ctx: &FieldCtx, seed: u64, trials: usize) -> LawCheck {
        let n = ctx.order();
        let q = ctx.q() as usize;
        let phi = Character::quadratic(ctx);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = (0..trials)
            .map(|trial| {
                let f: Vec<Vec<i64>> = (0..q)
                    .map(|_| (0..n).map(|_| rng.random_range(-5..=5)).collect())
                    .collect();
                let mut lhs = vec![0i64; n];
                let mut rhs = vec![0i64; n];
                for x in ctx.elements() {
                    let fx = &f[x.index() as usize];
                    if let Some(e) = phi.exponent_at(ctx, x) {
                        add_shifted(&mut lhs, fx, 0, if e == 0 { 1 } else { -1 });
                    }
                    add_shifted(&mut rhs, &f[ctx.square(x).index() as usize], 0, 1);
                    add_shifted(&mut rhs, fx, 0, -1);
                }
                vec![(same(&lhs, &rhs), format!("trial {trial}"))]
            })
            .collect();
        collect("quadratic-twist-sum", rows)
    }

    /// `sum_x psi(x^2) chi(1 + a x^2)
    ///   = psi(-1/a) J(psi, chi) + phi psi(-1/a) J(phi psi, chi)` for all
    /// `a != 0`, together with the `chi = phi` form written with binomial
    /// symbols.
    pub fn quadratic_substitution_sum(
        ctx: &FieldCtx,
        t: &JacobiTable,
        exec: Exec,
    ) -> (LawCheck, LawCheck) {
        let n = ctx.order();
        let cs = chars(ctx);
        let phi = Character::quadratic(ctx);
        let elems: Vec<_> = ctx.nonzero_elements().collect();
        let squares: Vec<_> = ctx.elements().map(|x| ctx.square(x)).collect();
        let rows = exec.map(&elems, |&a| {
            let m = ctx.neg(ctx.inv(a).expect("a is nonzero"));
            // log(x^2) and log(1 + a x^2) per x
            let terms: Vec<(Option<u32>, Option<u32>)> = squares
                .iter()
                .map(|&s| {
                    (
                        ctx.log_opt(s),
                        ctx.log_opt(ctx.add(ctx.one(), ctx.mul(a, s))),
                    )
                })
                .collect();
            let mut general = Vec::with_capacity(n * n);
            let mut special = Vec::with_capacity(n);
            for &psi in &cs {
                for &chi in &cs {
                    let mut lhs = vec![0i64; n];
                    for &(ls, lt) in &terms {
                        if let (Some(ls), Some(lt)) = (ls, lt) {
                            let e = (psi.index() as u64 * ls as u64
                                + chi.index() as u64 * lt as u64)
                                % n as u64;
                            lhs[e as usize] += 1;
                        }
                    }
                    let mut rhs = vec![0i64; n];
                    let e1 = psi.exponent_at(ctx, m).unwrap() as usize;
                    let e2 = phi.mul(psi).exponent_at(ctx, m).unwrap() as usize;
                    add_shifted(&mut rhs, t.counts(psi, chi), e1, 1);
                    add_shifted(&mut rhs, t.counts(phi.mul(psi), chi), e2, 1);
                    let label = format!("a={}, psi={psi}, chi={chi}", ctx.format_element(a));
                    if chi == phi {
                        // q phi(-1) [psi(-1/a)(psi choose phi psi) + phi psi(-1/a)(phi psi choose psi)]
                        let mut alt = vec![0i64; n];
                        add_shifted(
                            &mut alt,
                            &t.binom_scaled(psi, phi.mul(psi)),
                            e1,
                            phi.at_minus_one(),
                        );
                        add_shifted(
                            &mut alt,
                            &t.binom_scaled(phi.mul(psi), psi),
                            e2,
                            phi.at_minus_one(),
                        );
                        special.push((same(&lhs, &alt), label.clone()));
                    }
                    general.push((same(&lhs, &rhs), label));
                }
            }
            (general, special)
        });
        let (general, special): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        (
            collect("quadratic-substitution-sum", general),
            collect("quadratic-substitution-sum/phi", special),
        )
    }

    /// `(phi choose chi) = (phi chi choose chi) chi(-1)`, `(eps choose eps) =
    /// (q-2)/q`, and `(chi^2 choose chi) = (phi chi choose chi) chi(4)` for
    /// `chi != eps`.
    pub fn quadratic_binomials(ctx: &FieldCtx, t: &JacobiTable) -> LawCheck {
        let n = ctx.order();
        let phi = Character::quadratic(ctx);
        let eps = Character::trivial(ctx);
        let l4 = log4(ctx) as usize;
        let mut rows = Vec::new();
        let mut want = vec![0i64; n];
        want[0] = ctx.q() as i64 - 2;
        rows.push(vec![(
            same(&t.binom_scaled(eps, eps), &want),
            "eps".to_string(),
        )]);
        for chi in chars(ctx) {
            let s: Vec<i64> = t
                .binom_scaled(phi.mul(chi), chi)
                .iter()
                .map(|c| c * chi.at_minus_one())
                .collect();
            let mut row = vec![(
                same(&t.binom_scaled(phi, chi), &s),
                format!("phi over {chi}"),
            )];
            if !chi.is_trivial() {
                let rhs = shifted(
                    &t.binom_scaled(phi.mul(chi), chi),
                    chi.index() as usize * l4 % n,
                );
                row.push((
                    same(&t.binom_scaled(chi.pow(2), chi), &rhs),
                    format!("square over {chi}"),
                ));
            }
            rows.push(row);
        }
        collect("quadratic-binomials", rows)
    }

    /// Every law over one field.
    pub fn run_all(ctx: &FieldCtx, seed: u64, exec: Exec) -> Vec<LawCheck> {
        let t = JacobiTable::new(ctx, exec);
        let (sub, sub_phi) = quadratic_substitution_sum(ctx, &t, exec);
        vec![
            delta_expansion(ctx, &t, exec),
            conjugate_expansion(ctx, &t, exec),
            complement_symmetry(ctx, &t, exec),
            reflection_symmetry(ctx, &t, exec),
            trivial_binomials(ctx, &t, exec),
            duplication_product(ctx, &t, exec),
            square_product(ctx, &t, exec),
            quadratic_twist_sum(ctx, seed, 20),
            sub,
            sub_phi,
            quadratic_binomials(ctx, &t),
        ]
    }
}
