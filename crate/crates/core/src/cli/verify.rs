//! Named invariant suites run by `ktrace verify`.
//!
//! Each check compares an expected and an actual value rendered as strings.
//! A check that errors (for example on an exhausted budget) is recorded as a
//! failure and the suite carries on.

use std::collections::HashSet;
use std::fmt::Display;

use clap::ValueEnum;
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

use crate::classical::{
    dc_trace_histogram, double_coset_elements, enumerate_gl, group_order_data, iota, iota_inverse, is_orthogonal,
    is_symplectic, Family, GroupContext,
};
use crate::dcsum::{coefs, dc_histogram_closed, expsum_closed, expsum_dc, expsum_factored};
use crate::error::Result;
use crate::gf2r::{FieldDescriptor, MAX_DEGREE};
use crate::ksum::{kloosterman, kloosterman_gl, kloosterman_gl_bruteforce, kloosterman_table, moments, theta_character_sum, twisted_sum};
use crate::pmi::{mk_recursive, pless_check, t1k_recursive, thm_p_check};
use crate::wcode::{code_bruteforce_wd, dual_enumerate, dual_kernel, weight_prefix_thm_o};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Field,
    Kloosterman,
    Groups,
    Expsum,
    Codes,
    Pless,
    Thma,
    All,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Field => "field",
            Suite::Kloosterman => "kloosterman",
            Suite::Groups => "groups",
            Suite::Expsum => "expsum",
            Suite::Codes => "codes",
            Suite::Pless => "pless",
            Suite::Thma => "thma",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub status: &'static str,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

struct Recorder {
    suite: &'static str,
    checks: Vec<Check>,
}

impl Recorder {
    fn eq(&mut self, name: impl Into<String>, expected: impl Display, actual: impl Display) {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        let status = if expected == actual { "pass" } else { "fail" };
        self.checks.push(Check { suite: self.suite, name: name.into(), expected, actual, status });
    }

    /// Records `f`'s pair, or its error as a failure.
    fn try_eq<E: Display, A: Display>(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<(E, A)>) {
        let name = name.into();
        match f() {
            Ok((e, a)) => self.eq(name, e, a),
            Err(err) => self.checks.push(Check {
                suite: self.suite,
                name,
                expected: "ok".into(),
                actual: format!("error: {err}"),
                status: "fail",
            }),
        }
    }
}

fn field(r: u32) -> FieldDescriptor {
    FieldDescriptor::new(r).expect("built-in modulus")
}

/// Runs `suite` and returns its checks in a fixed order.
pub fn run_suite(suite: Suite, budget: u64, workers: usize) -> Vec<Check> {
    let mut rec = Recorder { suite: suite.name(), checks: Vec::new() };
    match suite {
        Suite::Field => field_suite(&mut rec),
        Suite::Kloosterman => kloosterman_suite(&mut rec, budget),
        Suite::Groups => groups_suite(&mut rec, budget, workers),
        Suite::Expsum => expsum_suite(&mut rec, budget, workers),
        Suite::Codes => codes_suite(&mut rec, budget),
        Suite::Pless => pless_suite(&mut rec, budget),
        Suite::Thma => thma_suite(&mut rec),
        Suite::All => {
            let all = [
                Suite::Field,
                Suite::Kloosterman,
                Suite::Groups,
                Suite::Expsum,
                Suite::Codes,
                Suite::Pless,
                Suite::Thma,
            ];
            return all.into_iter().flat_map(|s| run_suite(s, budget, workers)).collect();
        }
    }
    rec.checks
}

fn field_suite(rec: &mut Recorder) {
    let built = (1..=MAX_DEGREE).filter(|&r| FieldDescriptor::new(r).is_ok()).count();
    rec.eq("irreducible built-in moduli", MAX_DEGREE, built);
    for r in 1..=8 {
        let f = field(r);
        let q = f.order();
        let bad_inverse = f.nonzero_elements().filter(|x| *x * x.inv().unwrap() != f.one()).count();
        rec.eq(format!("x * x^-1 = 1, q = {q}"), 0, bad_inverse);
        let bad_frobenius = f.elements().filter(|x| x.square().trace() != x.trace() || x.sqrt().square() != *x).count();
        rec.eq(format!("tr(x^2) = tr(x) and sqrt, q = {q}"), 0, bad_frobenius);
        let trace_one = f.elements().filter(|x| x.trace() == 1).count();
        rec.eq(format!("trace-one count, q = {q}"), q / 2, trace_one);
        if r <= 4 {
            let bad_additive = f
                .elements()
                .flat_map(|x| f.elements().map(move |y| (x, y)))
                .filter(|(x, y)| (*x + *y).trace() != x.trace() ^ y.trace())
                .count();
            rec.eq(format!("trace additive, q = {q}"), 0, bad_additive);
        }
    }
}

fn kloosterman_suite(rec: &mut Recorder, budget: u64) {
    for (r, expect) in [(1u32, 1i64), (2, 3), (3, -5)] {
        let f = field(r);
        rec.try_eq(format!("K(1), q = {}", f.order()), || Ok((expect, kloosterman(&f, f.one(), f.one())?)));
    }
    for r in 1..=10 {
        let f = field(r);
        let q = f.order() as i64;
        let table = kloosterman_table(&f);
        let violations = table.iter().filter(|(_, k)| k * k > 4 * q).count();
        rec.eq(format!("Weil bound, q = {q}"), 0, violations);
    }
    for r in 1..=8 {
        let f = field(r);
        let q = f.order();
        let table = kloosterman_table(&f);
        let frob = f
            .nonzero_elements()
            .filter(|a| (1..=3).any(|s| table.get(a.pow(1 << s)).unwrap() != table.get(*a).unwrap()))
            .count();
        rec.eq(format!("K(a^(2^s)) = K(a), s <= 3, q = {q}"), 0, frob);
        let theta = f
            .nonzero_elements()
            .filter(|b| theta_character_sum(&f, *b).unwrap() != table.get(*b).unwrap() - 1)
            .count();
        rec.eq(format!("quadric character sum = K - 1, q = {q}"), 0, theta);
        let twisted = f
            .elements()
            .filter(|b| {
                let expect = if b.is_zero() { 1 } else { q as i64 * b.inv().unwrap().lambda() + 1 };
                twisted_sum(&f, *b).unwrap() != expect
            })
            .count();
        rec.eq(format!("twisted sum closed form, q = {q}"), 0, twisted);
        let split = (0..=10).filter(|&h| {
            let m = moments(&f, h);
            m.mk != &m.t0k + &m.t1k
        });
        rec.eq(format!("MK = T0K + T1K, h <= 10, q = {q}"), 0, split.count());
    }
    for (t, r) in [(2u32, 1u32), (2, 2), (3, 1)] {
        let f = field(r);
        for a in f.nonzero_elements() {
            rec.try_eq(format!("GL({t},{}) Kloosterman recursion, a = {a}", f.order()), || {
                Ok((kloosterman_gl_bruteforce(&f, t, a, f.one(), budget)?, kloosterman_gl(&f, t, a, f.one())?))
            });
        }
    }
}

fn groups_suite(rec: &mut Recorder, budget: u64, workers: usize) {
    let f2 = field(1);
    rec.try_eq("Sp(4,2) Bruhat partition", || {
        let sp: Vec<_> = enumerate_gl(f2, 4, budget)?.into_iter().filter(|w| is_symplectic(w, 2).unwrap()).collect();
        let ctx = GroupContext::symplectic(2, f2)?;
        let cells = (0..=2)
            .map(|r| Ok(double_coset_elements(&ctx, r, budget)?.collect::<HashSet<_>>()))
            .collect::<Result<Vec<_>>>()?;
        let sizes: Vec<usize> = sp.iter().fold(vec![0; 3], |mut acc, w| {
            let hits: Vec<usize> = (0..3).filter(|&r| cells[r].contains(w)).collect();
            if hits.len() == 1 {
                acc[hits[0]] += 1;
            }
            acc
        });
        Ok(("720 = [48, 288, 384]", format!("{} = {sizes:?}", sp.len())))
    });
    rec.try_eq("Tr w = Tr iota(w) + 1 on O(5,2)", || {
        let sp: Vec<_> = enumerate_gl(f2, 4, budget)?.into_iter().filter(|w| is_symplectic(w, 2).unwrap()).collect();
        let mut good = 0;
        for s in &sp {
            let w = iota_inverse(s, 2)?;
            if is_orthogonal(&w, 2)? && iota(&w, 2)? == *s && w.trace()? == s.trace()? + f2.one() {
                good += 1;
            }
        }
        Ok((720, good))
    });
    for (n, r) in [(1u32, 1u32), (3, 1), (1, 2), (1, 3), (1, 4)] {
        let f = field(r);
        rec.try_eq(format!("|DC({n},{})| = A B", f.order()), || {
            let cs = coefs(n, &f)?;
            Ok((cs.n_total, group_order_data(n, &f).cell_sizes[n as usize - 1].clone()))
        });
    }
    rec.try_eq("DC(3,2) trace histogram", || {
        let ctx = GroupContext::orthogonal(3, f2)?;
        let h = dc_trace_histogram(&ctx, 2, budget, workers)?;
        let closed = dc_histogram_closed(3, &f2)?;
        let render = |h: &crate::dcsum::TraceHistogram| format!("{} {} {}", h.total(), h.count_bits(0), h.count_bits(1));
        Ok(("602112 293888 308224 (closed form agrees)".to_string(), format!("{}{}", render(&h), if h == closed { " (closed form agrees)" } else { "" })))
    });
}

fn expsum_suite(rec: &mut Recorder, budget: u64, workers: usize) {
    let mut cases = vec![];
    for n in 1..=2u32 {
        for r in 1..=2u32 {
            cases.push((n, r));
        }
    }
    cases.push((1, 3));
    cases.push((1, 4));
    for (n, deg) in cases {
        let f = field(deg);
        for family in [Family::Orthogonal, Family::Symplectic] {
            for r in 0..=n {
                rec.try_eq(format!("{} cell sums n = {n}, r = {r}, q = {}", family.name(), f.order()), || {
                    let ctx = GroupContext::new(n as usize, f, family)?;
                    let h = dc_trace_histogram(&ctx, r as usize, budget, workers)?;
                    let mut expected = Vec::new();
                    let mut actual = Vec::new();
                    for c in f.nonzero_elements() {
                        expected.push(h.character_sum(c));
                        actual.push(crate::dcsum::expsum_cell(n, r, &f, c, family)?);
                        if family == Family::Orthogonal {
                            expected.push(h.character_sum(c));
                            actual.push(expsum_factored(n, r, &f, c)?);
                        }
                    }
                    Ok((format!("{expected:?}"), format!("{actual:?}")))
                });
            }
        }
    }
    for (n, deg) in [(1u32, 1u32), (1, 2), (1, 3), (1, 4), (3, 1)] {
        let f = field(deg);
        rec.try_eq(format!("lambda(a) A K(a) over DC({n},{})", f.order()), || {
            let a = BigInt::from(coefs(n, &f)?.a);
            let h = dc_histogram_closed(n, &f)?;
            let mut bad = 0;
            for c in f.nonzero_elements() {
                let expect = BigInt::from(c.lambda() * kloosterman(&f, c, f.one())?) * &a;
                let closed = expsum_closed(n, n - 1, &f, c)?;
                if expsum_dc(n, &f, c)? != expect || closed != expect || h.character_sum(c) != expect {
                    bad += 1;
                }
            }
            Ok((0, bad))
        });
    }
}

fn codes_suite(rec: &mut Recorder, budget: u64) {
    for deg in [1u32, 2] {
        let f = field(deg);
        rec.try_eq(format!("brute-force weight distribution (1,{})", f.order()), || {
            let brute = code_bruteforce_wd(1, &f, budget)?;
            let formula = weight_prefix_thm_o(1, &f, brute.len() - 1)?;
            let formula: Vec<String> = formula.values.iter().map(|c| c.to_string()).collect();
            Ok((format!("{brute:?}").replace(' ', ""), format!("[{}]", formula.join(","))))
        });
        rec.try_eq(format!("C_j = C_(N-j) at (1,{})", f.order()), || {
            let brute = code_bruteforce_wd(1, &f, budget)?;
            let reversed: Vec<u64> = brute.iter().rev().copied().collect();
            Ok((format!("{brute:?}"), format!("{reversed:?}")))
        });
        rec.try_eq(format!("Delsarte dual at (1,{})", f.order()), || {
            Ok((true, dual_enumerate(1, &f, budget)?.delsarte_verified == Some(true)))
        });
    }
    for (deg, expect) in [(1u32, "[0]"), (2, "[0, 1]"), (3, "[0]"), (4, "[0]")] {
        let f = field(deg);
        rec.try_eq(format!("dual kernel at (1,{})", f.order()), || {
            let k: Vec<u32> = dual_kernel(1, &f)?.iter().map(|a| a.bits()).collect();
            Ok((expect, format!("{k:?}")))
        });
    }
    rec.try_eq("dual kernel at (3,2)", || {
        let k: Vec<u32> = dual_kernel(3, &field(1))?.iter().map(|a| a.bits()).collect();
        Ok(("[0]", format!("{k:?}")))
    });
}

fn pless_suite(rec: &mut Recorder, budget: u64) {
    for deg in [3u32, 4] {
        let f = field(deg);
        for h in 1..=10 {
            rec.try_eq(format!("Pless identity (1,{}), h = {h}", f.order()), || {
                let d = dual_enumerate(1, &f, budget)?;
                let kernel = dual_kernel(1, &f)?;
                let weights = d.distinct_weights(&kernel);
                let len = coefs(1, &f)?.n_total;
                let prefix = weight_prefix_thm_o(1, &f, h as usize)?;
                let sides = pless_check(&len, deg, &weights, &prefix, h)?;
                Ok((sides.lhs, sides.rhs))
            });
        }
    }
    let f8 = field(3);
    rec.try_eq("Pless worked value (1,8), h = 1", || {
        let d = dual_enumerate(1, &f8, budget)?;
        let weights: Vec<BigUint> = d.entries.iter().map(|e| e.weight.clone()).collect();
        let prefix = weight_prefix_thm_o(1, &f8, 1)?;
        let sides = pless_check(&BigUint::from(56u32), 3, &weights, &prefix, 1)?;
        Ok(("224 = 224", format!("{} = {}", sides.lhs, sides.rhs)))
    });
}

fn thma_suite(rec: &mut Recorder) {
    for (n, deg) in [(1u32, 3u32), (1, 4), (3, 1)] {
        let f = field(deg);
        for h in [1u32, 3, 5, 7] {
            rec.try_eq(format!("T1K^{h} recursion at ({n},{})", f.order()), || {
                let report = t1k_recursive(n, &f, h)?;
                Ok((report.t1k_direct.unwrap_or_else(BigInt::zero), report.t1k_recursive))
            });
        }
        for h in 1..=7 {
            rec.try_eq(format!("MK identity at ({n},{}), h = {h}", f.order()), || {
                let sides = thm_p_check(n, &f, h)?;
                Ok((sides.lhs, sides.rhs))
            });
            rec.try_eq(format!("MK^{h} recursion at ({n},{})", f.order()), || {
                Ok((moments(&f, h).mk, mk_recursive(n, &f, h)?))
            });
        }
    }
}
