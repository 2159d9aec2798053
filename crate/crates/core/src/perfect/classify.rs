use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::group::{normalizer_in, Ambient, Subgroup};
use crate::perm::{Permutation, MAX_RANK_DEGREE};

use super::cyclic::{cyclic_fast_path, Interpretation};
use super::hypothesis::{
    hyp_commutative, hyp_three_generator, hyp_two_generator, search_extension, HypothesisInstance,
};
use super::oracle::oracle_double_coset;
use super::{verify_certificate, Certificate, PerfectError, Provenance, RuleId, Status, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Structural rules first; the oracle only when nothing else decides.
    FastOnly,
    /// The double-coset oracle on `H` in `S_n` and nothing else.
    OracleOnly,
    /// Structural rules, then the oracle whenever it fits the caps. The
    /// oracle's answer wins.
    #[default]
    FastWithOracleCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub policy: Policy,
    pub interpretation: Interpretation,
    pub caps: Caps,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: RuleId,
    pub basis: String,
    pub inputs: String,
    pub outcome: String,
}

/// A rule whose prediction disagreed with the final verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub rule: RuleId,
    pub predicted: Status,
    pub oracle: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub kind: String,
    pub data: Vec<String>,
}

impl CertificateRecord {
    pub fn from_certificate(c: &Certificate) -> Self {
        CertificateRecord {
            kind: c.kind().to_string(),
            data: c.data().iter().map(Permutation::to_cycle_string).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub n: usize,
    pub generators: Vec<String>,
    pub order: u64,
    pub verdict: Status,
    pub provenance: Provenance,
    pub rule_trace: Vec<TraceStep>,
    /// A certificate for the input subgroup in `S_n`, when one was built.
    pub certificate: Option<CertificateRecord>,
    pub discrepancies: Vec<Discrepancy>,
    pub timing_ms: u64,
}

/// Canonical generator strings: non-identity, deduplicated, sorted by rank.
pub fn canonical_generators(h: &Subgroup) -> Vec<String> {
    let mut g: Vec<Permutation> = h.generators().iter().copied().filter(|p| !p.is_identity()).collect();
    g.sort_unstable();
    g.dedup();
    g.iter().map(Permutation::to_cycle_string).collect()
}

type Checker = fn(&Subgroup, &Caps) -> Option<HypothesisInstance>;

struct Run<'a> {
    h: &'a Subgroup,
    opts: &'a ClassifyOptions,
    trace: Vec<TraceStep>,
    /// Every decisive or predictive rule outcome, for the discrepancy check.
    predictions: Vec<(RuleId, Status)>,
    checkers_ran: bool,
}

impl Run<'_> {
    fn step(&mut self, rule: RuleId, inputs: impl Into<String>, outcome: impl Into<String>) {
        self.trace.push(TraceStep {
            rule,
            basis: rule.basis().to_string(),
            inputs: inputs.into(),
            outcome: outcome.into(),
        });
    }

    fn n(&self) -> usize {
        self.h.degree()
    }

    /// `S_n` for checking a double-coset witness, which never enumerates
    /// the ambient group.
    fn witness_ambient(&self) -> Option<Ambient> {
        (self.n() <= MAX_RANK_DEGREE).then_some(Ambient::Symmetric { degree: self.n() })
    }

    fn witness_holds(&self, q: &Subgroup, cert: &Certificate) -> bool {
        self.witness_ambient().is_some_and(|g| verify_certificate(q, &g, cert))
    }

    /// Runs the non-cyclic checkers on the 2-subgroup `q`, recording each
    /// firing as a prediction. When `decisive`, returns the first firing
    /// whose witness verifies.
    fn checkers(&mut self, q: &Subgroup, decisive: bool) -> Option<(RuleId, Certificate)> {
        self.checkers_ran = true;
        let caps = self.opts.caps;
        let checkers: [(RuleId, Checker); 4] = [
            (RuleId::HypCommutative, hyp_commutative),
            (RuleId::HypTwoGenerator, hyp_two_generator),
            (RuleId::HypExtension, search_extension),
            (RuleId::HypThreeGenerator, hyp_three_generator),
        ];
        for (rule, check) in checkers {
            let Some(inst) = check(q, &caps) else {
                continue;
            };
            let cert = inst.witness();
            let gens: Vec<String> = inst.generators.iter().map(|g| g.to_string()).collect();
            let inputs = format!("generators [{}], root {}", gens.join(", "), inst.root);
            self.predictions.push((rule, Status::NotPerfect));
            let holds = self.witness_holds(q, &cert);
            match (holds, decisive) {
                (true, true) => {
                    self.step(rule, inputs, "NotPerfect, witness verified");
                    return Some((rule, cert));
                }
                (true, false) => self.step(rule, inputs, "predicts NotPerfect, witness verified"),
                (false, _) => self.step(rule, inputs, "hypotheses hold but the witness coset is not bad"),
            }
        }
        None
    }

    /// Rules that avoid enumerating `S_n`. Returns the first decisive
    /// verdict together with a certificate for `H` itself when available.
    fn fast(&mut self) -> Result<Option<(Verdict, Option<Certificate>)>, PerfectError> {
        let h = self.h;
        let n = self.n();
        let order = h.order();
        if order % 2 == 1 {
            self.step(RuleId::OddOrder, format!("|H| = {order}"), "Perfect");
            self.predictions.push((RuleId::OddOrder, Status::Perfect));
            return Ok(Some((Verdict::rule(Status::Perfect, RuleId::OddOrder), None)));
        }
        // v2(n!) = n - popcount(n)
        let v2_sym = n as u32 - (n as u32).count_ones();
        if order.trailing_zeros() == v2_sym {
            self.step(
                RuleId::OddIndex,
                format!("|H| = {order}, 2-part of n! = 2^{v2_sym}"),
                "Perfect",
            );
            self.predictions.push((RuleId::OddIndex, Status::Perfect));
            return Ok(Some((Verdict::rule(Status::Perfect, RuleId::OddIndex), None)));
        }

        let q = h.sylow2();
        let reduced = q.order() != order;
        if reduced {
            self.step(
                RuleId::Sylow2Reduction,
                format!("|H| = {order}"),
                format!("Q of order {}", q.order()),
            );
        }
        let lift = |c: Certificate| if reduced { None } else { Some(c) };
        let mut chain = if reduced {
            vec![RuleId::Sylow2Reduction]
        } else {
            Vec::new()
        };

        if let Some(x) = q.cyclic_generator() {
            let inputs = format!("Q = <{x}>, cycle type {}", x.cycle_type());
            if x.parity().is_odd() {
                self.step(RuleId::CyclicOddPermutation, inputs, "Perfect");
                self.predictions.push((RuleId::CyclicOddPermutation, Status::Perfect));
                return Ok(Some((
                    Verdict::rule(Status::Perfect, RuleId::CyclicOddPermutation),
                    None,
                )));
            }
            if let Some(r) = x.square_root() {
                let cert = Certificate::BadDoubleCoset(r);
                if self.witness_holds(&q, &cert) {
                    self.step(RuleId::CyclicSquare, inputs, format!("NotPerfect, witness {r}"));
                    self.predictions.push((RuleId::CyclicSquare, Status::NotPerfect));
                    return Ok(Some((
                        Verdict::rule(Status::NotPerfect, RuleId::CyclicSquare),
                        lift(cert),
                    )));
                }
                self.step(
                    RuleId::CyclicSquare,
                    inputs.clone(),
                    format!("witness {r} not verified"),
                );
            }
            let v = cyclic_fast_path(&x, self.opts.interpretation)?;
            let rule = self.opts.interpretation.rule();
            self.step(rule, inputs, v.status.to_string());
            self.predictions.push((rule, v.status));
            return Ok(Some((v, None)));
        }

        if let Some((rule, cert)) = self.checkers(&q, true) {
            return Ok(Some((Verdict::rule(Status::NotPerfect, rule), lift(cert))));
        }

        let caps = &self.opts.caps;
        if n > caps.max_full_degree {
            return Ok(None);
        }
        let sym = Ambient::symmetric(n, caps)?;
        let norm = normalizer_in(&q, &sym)?;
        let (v, cert) = oracle_double_coset(&q, &Ambient::restricted(norm.clone()), caps)?;
        self.step(
            RuleId::NormalizerReduction,
            format!("|Q| = {}, |N(Q)| = {}", q.order(), norm.order()),
            v.status.to_string(),
        );
        self.predictions.push((RuleId::NormalizerReduction, v.status));
        chain.push(RuleId::NormalizerReduction);
        let lifted = match cert {
            // QxQ is the same set whether viewed in N(Q) or in S_n
            c @ Certificate::BadDoubleCoset(_) => lift(c),
            Certificate::Transversal(_) => None,
        };
        Ok(Some((
            Verdict {
                status: v.status,
                provenance: Provenance::ReducedThenOracle(chain),
            },
            lifted,
        )))
    }

    fn oracle(&mut self) -> Result<(Verdict, Certificate), PerfectError> {
        let sym = Ambient::symmetric(self.n(), &self.opts.caps)?;
        let (v, cert) = oracle_double_coset(self.h, &sym, &self.opts.caps)?;
        self.step(
            RuleId::DoubleCosetOracle,
            format!("H in S_{}", self.n()),
            format!("{}, {} certificate verified", v.status, cert.kind()),
        );
        Ok((v, cert))
    }
}

/// Decides whether `h` is a perfect code of `S_n`, recording which rules
/// fired.
pub fn classify(h: &Subgroup, opts: &ClassifyOptions) -> Result<ClassifyReport, PerfectError> {
    let start = Instant::now();
    let mut run = Run {
        h,
        opts,
        trace: Vec::new(),
        predictions: Vec::new(),
        checkers_ran: false,
    };
    let oracle_fits = h.degree() <= opts.caps.max_full_degree;

    let (verdict, cert) = match opts.policy {
        Policy::OracleOnly => {
            let (v, c) = run.oracle()?;
            (v, Some(c))
        }
        Policy::FastOnly => match run.fast()? {
            Some(found) => found,
            None if oracle_fits => {
                let (v, c) = run.oracle()?;
                (v, Some(c))
            }
            None => {
                return Err(PerfectError::Undecided(
                    "no structural rule applies and S_n exceeds the caps".into(),
                ))
            }
        },
        Policy::FastWithOracleCheck => {
            let fast = match run.fast() {
                Ok(found) => found,
                Err(e) if e.is_resource() && oracle_fits => None,
                Err(e) => return Err(e),
            };
            if oracle_fits {
                // rules skipped by an earlier decision still get compared
                if !run.checkers_ran {
                    run.checkers(&h.sylow2(), false);
                }
                let (v, c) = run.oracle()?;
                (v, Some(c))
            } else {
                fast.ok_or_else(|| {
                    PerfectError::Undecided("no structural rule applies and S_n exceeds the caps".into())
                })?
            }
        }
    };

    let oracle_backed = !matches!(verdict.provenance, Provenance::TheoremFastPath(_));
    let discrepancies = if oracle_backed {
        run.predictions
            .iter()
            .filter(|(_, s)| *s != verdict.status)
            .map(|&(rule, predicted)| Discrepancy {
                rule,
                predicted,
                oracle: verdict.status,
            })
            .collect()
    } else {
        Vec::new()
    };

    Ok(ClassifyReport {
        n: h.degree(),
        generators: canonical_generators(h),
        order: h.order(),
        verdict: verdict.status,
        provenance: verdict.provenance,
        rule_trace: run.trace,
        certificate: cert.as_ref().map(CertificateRecord::from_certificate),
        discrepancies,
        timing_ms: start.elapsed().as_millis() as u64,
    })
}
