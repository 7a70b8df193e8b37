//! Verification suites and the `verify`, `compute` and `cartan` commands built on them.

use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::coeffalg::Algebra;
use crate::commfilt::FiltrationCache;
use crate::current::{lie_closure, ClosedForms, Mutation, TensorContext};
use crate::error::{Error, Result};
use crate::groups::{
    cartan_criterion_classical, cartan_criterion_sl2, conjecture_probe, diagonal_battery,
    expansion_sign, from_delta_to_d_check, homogeneity_check_dij, homogeneity_check_dm,
    in_group_direct, inverse_table_check, BatteryInstance, DiagKind, DiagonalUnit, DifferenceTable,
    Root,
};
use crate::pairs::{form_phi0, form_phi1, pair_from_spec, sl2_triple, CompatiblePair};
use crate::report::{
    degree_rows, timed, Backend, CheckRecord, Command, ObjectDump, Report, RunConfig, Verdict,
};
use crate::scalar::SparseVec;
use crate::subspace::GradedSubspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    FiltrationIdentities,
    BoundsChain,
    PerfectEquality,
    ClosedForms,
    CartanClassical,
    CartanSl2,
    DifferenceCalculus,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::FiltrationIdentities,
        Suite::BoundsChain,
        Suite::PerfectEquality,
        Suite::ClosedForms,
        Suite::CartanClassical,
        Suite::CartanSl2,
        Suite::DifferenceCalculus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::FiltrationIdentities => "filtration-identities",
            Suite::BoundsChain => "bounds-chain",
            Suite::PerfectEquality => "perfect-equality",
            Suite::ClosedForms => "closed-forms",
            Suite::CartanClassical => "cartan-classical",
            Suite::CartanSl2 => "cartan-sl2",
            Suite::DifferenceCalculus => "difference-calculus",
        }
    }

    /// Comma-separated suite names, or `all`.
    pub fn parse_list(text: &str) -> Result<Vec<Suite>> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim) {
            if part == "all" {
                return Ok(Suite::ALL.to_vec());
            }
            let s = Suite::ALL
                .into_iter()
                .find(|s| s.name() == part)
                .ok_or_else(|| Error::Config(format!("unknown suite '{part}'")))?;
            if !out.contains(&s) {
                out.push(s);
            }
        }
        Ok(out)
    }

    pub fn run(self, setup: &Setup) -> Vec<CheckRecord> {
        let mut out = match self {
            Suite::FiltrationIdentities => filtration_identities(setup),
            Suite::BoundsChain => bounds_chain(setup),
            Suite::PerfectEquality => perfect_equality(setup),
            Suite::ClosedForms => closed_forms(setup),
            Suite::CartanClassical => cartan_suite(setup, Criterion::Classical),
            Suite::CartanSl2 => cartan_suite(setup, Criterion::Sl2),
            Suite::DifferenceCalculus => difference_calculus(setup),
        };
        for r in &mut out {
            r.name = format!("{}/{}", self.name(), r.name);
        }
        out
    }
}

/// Coefficient algebra, pair and tensor context for one run.
pub struct Setup {
    pub config: RunConfig,
    pub coeffs: Arc<Algebra>,
    pub pair: CompatiblePair,
    pub tctx: TensorContext,
    pub mutation: Mutation,
    closure: OnceLock<GradedSubspace>,
}

pub fn coefficients(cfg: &RunConfig) -> Result<Arc<Algebra>> {
    match cfg.backend {
        Backend::Free => Algebra::free_named(cfg.gens.clone(), cfg.deg, cfg.unital),
        Backend::Matrix(n) => Ok(Algebra::matrices(n)),
    }
}

impl Setup {
    pub fn new(cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        let coeffs = coefficients(cfg)?;
        let pair = pair_from_spec(&cfg.pair)?;
        let tctx = TensorContext::new(&coeffs, pair.size());
        Ok(Setup {
            config: cfg.clone(),
            coeffs,
            pair,
            tctx,
            mutation: Mutation::None,
            closure: OnceLock::new(),
        })
    }

    pub fn with_mutation(mut self, m: Mutation) -> Self {
        self.mutation = m;
        self
    }

    /// The current algebra of the pair, computed once by saturation.
    pub fn closure(&self) -> &GradedSubspace {
        self.closure
            .get_or_init(|| lie_closure(&self.pair, &self.tctx, None))
    }

    fn closed_forms(&self) -> ClosedForms<'_> {
        ClosedForms::new(&self.pair, &self.tctx).with_mutation(self.mutation)
    }

    fn filtration_range(&self) -> (usize, usize) {
        match self.config.backend {
            Backend::Free => (
                self.config.deg.saturating_sub(1).clamp(1, 4),
                self.config.deg.min(4),
            ),
            Backend::Matrix(_) => (3, 3),
        }
    }
}

/// Runs the suites on a worker pool; records come back in suite order.
pub fn run_suites(setup: &Setup, suites: &[Suite]) -> Vec<CheckRecord> {
    let parts: Vec<Vec<CheckRecord>> = suites.par_iter().map(|s| s.run(setup)).collect();
    parts.into_iter().flatten().collect()
}

/// Collects many instances of one statement into a single record.
struct Tally {
    name: String,
    anchor: String,
    total: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new(name: &str, anchor: &str) -> Self {
        Tally {
            name: name.into(),
            anchor: anchor.into(),
            total: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, label: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failures.push(label());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(self) -> CheckRecord {
        let verdict = if self.total == 0 {
            Verdict::Vacuous
        } else {
            Verdict::from_bool(self.failures.is_empty())
        };
        let mut note = format!("{} instances", self.total);
        if !self.failures.is_empty() {
            let shown: Vec<&str> = self.failures.iter().take(5).map(String::as_str).collect();
            note.push_str(&format!(
                "; {} failed: {}",
                self.failures.len(),
                shown.join(", ")
            ));
        }
        for n in &self.notes {
            note.push_str("; ");
            note.push_str(n);
        }
        CheckRecord::new(self.name, self.anchor, verdict).with_note(note)
    }
}

fn subset(a: &GradedSubspace, b: &GradedSubspace) -> bool {
    a.is_subset(b).unwrap_or(false)
}

fn filtration_identities(setup: &Setup) -> Vec<CheckRecord> {
    let f = setup.coeffs.clone();
    let mut c = FiltrationCache::new(&f);
    let (kmax, lmax) = setup.filtration_range();
    let full = f.full_space();
    let mut out = Vec::new();

    out.push(timed(|| {
        let mut t = Tally::new("recursion", "I_k^l = sum_i F^(i) I_{k-i}^{l-1}");
        for k in 0..=kmax {
            for l in 2..=lmax {
                let mut rhs = c.zero();
                for i in 0..=k {
                    let a = c.commutator_space(i);
                    let b = c.ideal_ikl(k - i, l - 1);
                    rhs.absorb(&f.span_product(&a, &b));
                }
                t.check(c.ideal_ikl(k, l) == rhs, || format!("k={k} l={l}"));
            }
        }
        t.finish()
    }));

    out.push(timed(|| {
        let mut t = Tally::new(
            "descending",
            "I_k^l in I_{k-1}^l and I_k^{<=l} in I_{k-1}^{<=l}",
        );
        for k in 1..=kmax {
            for l in 1..=lmax {
                t.check(subset(&c.ideal_ikl(k, l), &c.ideal_ikl(k - 1, l)), || {
                    format!("k={k} l={l}")
                });
                t.check(
                    subset(&c.ideal_ik_le(k, l), &c.ideal_ik_le(k - 1, l)),
                    || format!("k={k} l<={l}"),
                );
            }
        }
        t.finish()
    }));

    out.push(timed(|| {
        let mut t = Tally::new(
            "bracket-raises",
            "[F, I_{k-1}^l] in I_k^l and [F, I_{k-1}^{<=l}] in I_k^{<=l}",
        );
        for k in 1..=kmax {
            for l in 1..=lmax {
                let a = f.span_bracket(&full, &c.ideal_ikl(k - 1, l));
                t.check(subset(&a, &c.ideal_ikl(k, l)), || format!("k={k} l={l}"));
                let b = f.span_bracket(&full, &c.ideal_ik_le(k - 1, l));
                t.check(subset(&b, &c.ideal_ik_le(k, l)), || format!("k={k} l<={l}"));
            }
        }
        t.finish()
    }));

    out.push(timed(|| {
        let mut t = Tally::new(
            "cumulative-recursion",
            "I_k^{<=l+1} = F [F, I_{k-1}^{<=l}] + [F, I_{k-1}^{<=l+1}]",
        );
        for k in 1..=kmax {
            for l in 1..lmax {
                let inner = f.span_bracket(&full, &c.ideal_ik_le(k - 1, l));
                let mut rhs = f.span_product(&full, &inner);
                rhs.absorb(&f.span_bracket(&full, &c.ideal_ik_le(k - 1, l + 1)));
                t.check(c.ideal_ik_le(k, l + 1) == rhs, || format!("k={k} l={l}"));
            }
        }
        t.finish()
    }));

    let pairs_kl: Vec<(usize, usize, usize, usize)> = (0..=kmax)
        .flat_map(|k| (0..=kmax - k).map(move |k2| (k, k2)))
        .flat_map(|(k, k2)| {
            (1..lmax).flat_map(move |l| (1..=lmax - l).map(move |l2| (k, k2, l, l2)))
        })
        .collect();

    out.push(timed(|| {
        let mut t = Tally::new("products", "I_k^l I_k'^l' in I_{k+k'}^{l+l'}, also for <=l");
        for &(k, k2, l, l2) in &pairs_kl {
            let p = f.span_product(&c.ideal_ikl(k, l), &c.ideal_ikl(k2, l2));
            t.check(subset(&p, &c.ideal_ikl(k + k2, l + l2)), || {
                format!("({k},{l})({k2},{l2})")
            });
            let p = f.span_product(&c.ideal_ik_le(k, l), &c.ideal_ik_le(k2, l2));
            t.check(subset(&p, &c.ideal_ik_le(k + k2, l + l2)), || {
                format!("({k},<={l})({k2},<={l2})")
            });
        }
        t.finish()
    }));

    out.push(timed(|| {
        let mut t = Tally::new(
            "brackets",
            "[I_k^l, I_k'^l'] in [F, I_{k+k'}^{l+l'-1}], also for <=l",
        );
        for &(k, k2, l, l2) in &pairs_kl {
            let b = f.span_bracket(&c.ideal_ikl(k, l), &c.ideal_ikl(k2, l2));
            let target = f.span_bracket(&full, &c.ideal_ikl(k + k2, l + l2 - 1));
            t.check(subset(&b, &target), || format!("({k},{l})({k2},{l2})"));
            let b = f.span_bracket(&c.ideal_ik_le(k, l), &c.ideal_ik_le(k2, l2));
            let target = f.span_bracket(&full, &c.ideal_ik_le(k + k2, l + l2 - 1));
            t.check(subset(&b, &target), || format!("({k},<={l})({k2},<={l2})"));
        }
        t.finish()
    }));

    out.push(timed(|| {
        let mut t = Tally::new("two-sided", "F I_k + I_k F in I_k");
        for k in 0..=kmax {
            let ik = c.ideal_ik(k);
            let mut s = f.span_product(&full, &ik);
            s.absorb(&f.span_product(&ik, &full));
            t.check(subset(&s, &ik), || format!("k={k}"));
        }
        t.finish()
    }));

    out.push(timed(|| {
        if !f.is_unital() {
            return CheckRecord::new("closed-form", "I_k = I_k^k + F I_k^k", Verdict::Vacuous)
                .with_note("only stated for unital coefficient algebras");
        }
        let mut t = Tally::new("closed-form", "I_k = I_k^k + F I_k^k");
        for k in 1..=kmax {
            t.check(c.ideal_ik(k) == c.ideal_ik_closed(k), || format!("k={k}"));
        }
        t.finish()
    }));

    // the same recursion and products for the letters as generating set
    out.push(timed(|| {
        let s = GradedSubspace::span(f.grading(), &f.generators());
        let mut cs = FiltrationCache::with_subspace(&f, s);
        let mut t = Tally::new(
            "generated-recursion",
            "I_k^l(S) = sum_i S^(i) I_{k-i}^{l-1}(S) and products",
        );
        for k in 0..=kmax {
            for l in 2..=lmax {
                let mut rhs = cs.zero();
                for i in 0..=k {
                    let a = cs.commutator_space(i);
                    let b = cs.ideal_ikl(k - i, l - 1);
                    rhs.absorb(&f.span_product(&a, &b));
                }
                t.check(cs.ideal_ikl(k, l) == rhs, || format!("k={k} l={l}"));
            }
        }
        for &(k, k2, l, l2) in &pairs_kl {
            let p = f.span_product(&cs.ideal_ikl(k, l), &cs.ideal_ikl(k2, l2));
            t.check(subset(&p, &cs.ideal_ikl(k + k2, l + l2)), || {
                format!("({k},{l})({k2},{l2})")
            });
        }
        t.finish()
    }));

    if let Backend::Matrix(_) = setup.config.backend {
        out.push(timed(|| {
            CheckRecord::equality(
                "first-ideal-is-everything",
                "I_1(F) = F for a simple F",
                &c.ideal_ik(1),
                &full,
            )
        }));
    }
    out
}

fn bounds_chain(setup: &Setup) -> Vec<CheckRecord> {
    let l = setup.closure().clone();
    let mut cf = setup.closed_forms();
    let tb = cf.tilde_bound(None);
    let ob = cf.overline_bound(None);
    let tctx = &setup.tctx;
    let mut out = vec![
        CheckRecord::inclusion(
            "closure-in-overline",
            "current algebra in refined upper bound",
            &l,
            &ob,
        ),
        CheckRecord::inclusion(
            "overline-in-tilde",
            "refined upper bound in upper bound",
            &ob,
            &tb,
        ),
        CheckRecord::new(
            "tilde-closed",
            "upper bound is a Lie subalgebra",
            Verdict::from_bool(tctx.is_bracket_closed(&tb)),
        ),
        CheckRecord::new(
            "overline-closed",
            "refined upper bound is a Lie subalgebra",
            Verdict::from_bool(tctx.is_bracket_closed(&ob)),
        ),
    ];
    out.push(CheckRecord::inclusion(
        "closure-in-tilde",
        "current algebra in upper bound",
        &l,
        &tb,
    ));

    let mut tilde_m = vec![GradedSubspace::zero(tctx.grading())];
    for m in 1..=4 {
        tilde_m.push(cf.tilde_bound(Some(m)));
    }
    for (m, tm) in tilde_m.iter().enumerate().skip(2) {
        out.push(timed(|| {
            let lm = lie_closure(&setup.pair, tctx, Some(m));
            let om = cf.overline_bound(Some(m));
            let env = cf.f_enveloping(m);
            let ok = subset(&lm, &om) && subset(&om, tm) && subset(tm, &env);
            CheckRecord::new(
                format!("filtered-chain m={m}"),
                "filtered pieces: current in refined in upper bound in F <g>_m",
                Verdict::from_bool(ok),
            )
            .with_degrees(degree_rows(&lm, tm))
        }));
    }
    out.push(timed(|| {
        let mut t = Tally::new(
            "filtered-brackets",
            "[upper bound_a, upper bound_b] in upper bound_{a+b}",
        );
        for a in 1..=3 {
            for b in a..=4 - a {
                let br = tctx.span_bracket(&tilde_m[a], &tilde_m[b]);
                t.check(subset(&br, &tilde_m[a + b]), || format!("a={a} b={b}"));
            }
        }
        t.finish()
    }));
    out
}

fn perfect_equality(setup: &Setup) -> Vec<CheckRecord> {
    let pair = &setup.pair;
    let rep = pair.is_perfect(None);
    let mut out = Vec::new();
    let perfect = if rep.perfect {
        CheckRecord::new("is-perfect", "perfectness of the pair", Verdict::Pass)
            .with_note(format!("checked up to k={}", rep.checked_up_to))
    } else {
        CheckRecord::new("is-perfect", "perfectness of the pair", Verdict::Vacuous).with_note(
            format!(
                "not perfect: first failure at k={}",
                rep.first_failure.unwrap_or(0)
            ),
        )
    };
    out.push(perfect);
    out.push(timed(|| {
        let l = setup.closure();
        let tb = setup.closed_forms().tilde_bound(None);
        let mut r = CheckRecord::equality(
            "closure-equals-tilde",
            "perfect pairs reach the upper bound",
            l,
            &tb,
        );
        if !rep.perfect {
            r.verdict = Verdict::Vacuous;
            r.note = Some("pair is not perfect, equality not asserted".into());
        }
        r
    }));
    let name = pair.name();
    let witness = if name.starts_with("sl2irrep:") || name.starts_with("sl:") {
        Some(sl2_triple(pair.size())[2].clone())
    } else {
        None
    };
    out.push(timed(|| {
        let anchor = "a strongly graded witness implies perfectness";
        match witness.as_ref().map(|h| pair.strongly_graded_witness(h)) {
            None => CheckRecord::new("strongly-graded", anchor, Verdict::Vacuous)
                .with_note("no grading element known for this pair"),
            Some(Ok(true)) => {
                CheckRecord::new("strongly-graded", anchor, Verdict::from_bool(rep.perfect))
            }
            Some(Ok(false)) => CheckRecord::new("strongly-graded", anchor, Verdict::Unsupported)
                .with_note("grading element does not give a split strong grading over Q"),
            Some(Err(e)) => CheckRecord::from_error("strongly-graded", anchor, &e),
        }
    }));
    out
}

fn closed_forms(setup: &Setup) -> Vec<CheckRecord> {
    let l = setup.closure().clone();
    let mut cf = setup.closed_forms();
    let name = setup.pair.name().to_string();
    let n = setup.pair.size();
    let compare = |check: &str, anchor: &str, form: Result<GradedSubspace>| match form {
        Ok(s) => CheckRecord::equality(check, anchor, &l, &s),
        Err(e) => CheckRecord::from_error(check, anchor, &e),
    };
    let vacuous = |check: &str, anchor: &str, why: &str| {
        CheckRecord::new(check, anchor, Verdict::Vacuous).with_note(why)
    };
    let mut out = Vec::new();

    out.push(timed(|| {
        compare(
            "type-two",
            "closed form for pairs of type two",
            cf.type2_formula(),
        )
    }));
    out.push(timed(|| {
        let anchor = "F' 1 + F sl(V) for the special linear pair";
        if name.starts_with("sl:") {
            compare("special-linear", anchor, Ok(cf.special_linear_form()))
        } else {
            vacuous("special-linear", anchor, "pair is not sl:n")
        }
    }));
    out.push(timed(|| {
        let anchor = "orthogonal and symplectic currents for a nondegenerate form";
        if name.starts_with("so:") {
            compare("orthogonal", anchor, cf.orthogonal_form(&form_phi0(n)))
        } else if name.starts_with("sp:") {
            compare("orthogonal", anchor, cf.orthogonal_form(&form_phi1(n / 2)))
        } else {
            vacuous("orthogonal", anchor, "pair is not so:n or sp:n")
        }
    }));
    out.push(timed(|| {
        let anchor = "currents of an abelian g";
        if setup.pair.is_abelian() {
            compare("abelian", anchor, Ok(cf.abelian_currents_form()))
        } else {
            vacuous("abelian", anchor, "g is not abelian")
        }
    }));
    out.push(timed(|| {
        compare(
            "semisimple",
            "semisimple g: filtration times centerless powers plus central parts",
            cf.semisimple_closed_form(),
        )
    }));
    out.push(timed(|| {
        let anchor = "irreducible sl_2 representations: sums of isotypic components";
        if name.starts_with("sl2irrep:") {
            compare("sl2-irrep", anchor, cf.sl2_closed_form())
        } else {
            vacuous("sl2-irrep", anchor, "pair is not sl2irrep:n")
        }
    }));
    out.push(timed(|| {
        let anchor = "coefficients with I_1(F) = F give F' 1 + F g";
        let full = setup.coeffs.full_space();
        if cf.filtration().ideal_ik(1) == full {
            compare("simple-coefficients", anchor, Ok(cf.simple_f_form()))
        } else {
            vacuous("simple-coefficients", anchor, "I_1(F) is smaller than F")
        }
    }));
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Criterion {
    Classical,
    Sl2,
}

impl Criterion {
    fn applies(self, pair: &CompatiblePair) -> bool {
        let name = pair.name();
        match self {
            Criterion::Classical => name.starts_with("so:") || name.starts_with("sp:"),
            Criterion::Sl2 => name.starts_with("sl2irrep:"),
        }
    }

    fn evaluate(self, d: &DiagonalUnit, filt: &mut FiltrationCache) -> Result<bool> {
        Ok(match self {
            Criterion::Classical => cartan_criterion_classical(d, filt)?.holds,
            Criterion::Sl2 => cartan_criterion_sl2(d, filt)?.holds,
        })
    }
}

/// Battery size per kind in the Cartan suites.
pub const CARTAN_PER_KIND: usize = 8;

/// Number of instances where criterion and direct test agree, and how many were positive
/// and negative.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Agreement {
    pub total: usize,
    pub agree: usize,
    pub positive: usize,
    pub negative: usize,
    pub min_budget: usize,
}

fn needs_units(setup: &Setup) -> Option<CheckRecord> {
    if !setup.coeffs.is_unital() {
        return Some(
            CheckRecord::new("setup", "diagonal units", Verdict::Unsupported)
                .with_note("needs a unital coefficient algebra (--unital)"),
        );
    }
    if setup.coeffs.as_free().is_none() || setup.coeffs.generators().len() < 2 {
        return Some(
            CheckRecord::new("setup", "diagonal units", Verdict::Unsupported)
                .with_note("needs the free backend with at least two generators"),
        );
    }
    None
}

fn cartan_suite(setup: &Setup, crit: Criterion) -> Vec<CheckRecord> {
    let anchor = match crit {
        Criterion::Classical => {
            "Cartan criterion for classical pairs agrees with direct membership"
        }
        Criterion::Sl2 => "Cartan criterion for sl_2 pairs agrees with direct membership",
    };
    if !crit.applies(&setup.pair) {
        return vec![CheckRecord::new("agreement", anchor, Verdict::Vacuous)
            .with_note("criterion does not apply to this pair")];
    }
    if let Some(r) = needs_units(setup) {
        return vec![r];
    }
    let mut out = Vec::new();
    out.push(timed(|| {
        match cartan_battery(setup, crit, setup.config.seed) {
            Ok((agr, failures)) => {
                let mut r = CheckRecord::new(
                    "agreement",
                    anchor,
                    Verdict::from_bool(agr.agree == agr.total),
                )
                .with_budget(agr.min_budget)
                .with_note(format!(
                    "{} instances, {} positive, {} negative, {} agree",
                    agr.total, agr.positive, agr.negative, agr.agree
                ));
                if !failures.is_empty() {
                    r.note = Some(format!(
                        "{}; disagreements: {}",
                        r.note.unwrap_or_default(),
                        failures.join(", ")
                    ));
                }
                r
            }
            Err(e) => CheckRecord::from_error("agreement", anchor, &e),
        }
    }));
    if let Some(text) = &setup.config.diag {
        out.push(timed(|| match single_diagonal(setup, crit, text) {
            Ok(r) => r,
            Err(e) => CheckRecord::from_error("given-diagonal", anchor, &e),
        }));
    }
    out
}

/// Compares a criterion with direct membership on a seeded battery for the setup's pair.
/// Returns the counts and labels of disagreeing instances.
fn cartan_battery(setup: &Setup, crit: Criterion, seed: u64) -> Result<(Agreement, Vec<String>)> {
    let mut filt = FiltrationCache::new(&setup.coeffs);
    let battery = diagonal_battery(&mut filt, setup.pair.size(), seed, CARTAN_PER_KIND)?;
    let closure = setup.closure();
    let mut agr = Agreement {
        min_budget: usize::MAX,
        ..Default::default()
    };
    let mut failures = Vec::new();
    for (idx, BatteryInstance { kind, diag }) in battery.iter().enumerate() {
        let holds = crit.evaluate(diag, &mut filt)?;
        let direct = in_group_direct(
            &diag.to_tensor(&setup.tctx),
            &setup.pair,
            &setup.tctx,
            closure,
        )?;
        agr.total += 1;
        agr.min_budget = agr.min_budget.min(direct.budget);
        if holds {
            agr.positive += 1;
        } else {
            agr.negative += 1;
        }
        if holds == direct.member {
            agr.agree += 1;
        } else {
            failures.push(format!("{kind:?}#{idx} [{}]", diag.format()));
        }
    }
    if agr.total == 0 {
        agr.min_budget = 0;
    }
    Ok((agr, failures))
}

/// Public entry point for [`cartan_battery`] by suite.
pub fn cartan_battery_for(
    setup: &Setup,
    suite: Suite,
    seed: u64,
) -> Result<(Agreement, Vec<String>)> {
    let crit = match suite {
        Suite::CartanClassical => Criterion::Classical,
        Suite::CartanSl2 => Criterion::Sl2,
        _ => {
            return Err(Error::Config(format!(
                "{} is not a Cartan suite",
                suite.name()
            )))
        }
    };
    if !crit.applies(&setup.pair) {
        return Err(Error::Precondition(format!(
            "criterion does not apply to {}",
            setup.pair.name()
        )));
    }
    cartan_battery(setup, crit, seed)
}

fn single_diagonal(setup: &Setup, crit: Criterion, text: &str) -> Result<CheckRecord> {
    let d = DiagonalUnit::parse(&setup.coeffs, text)?;
    if d.len() != setup.pair.size() {
        return Err(Error::Config(format!(
            "diagonal has {} entries, pair needs {}",
            d.len(),
            setup.pair.size()
        )));
    }
    let mut filt = FiltrationCache::new(&setup.coeffs);
    let holds = crit.evaluate(&d, &mut filt)?;
    let direct = in_group_direct(
        &d.to_tensor(&setup.tctx),
        &setup.pair,
        &setup.tctx,
        setup.closure(),
    )?;
    Ok(CheckRecord::new(
        "given-diagonal",
        "criterion and direct membership agree on the given diagonal",
        Verdict::from_bool(holds == direct.member),
    )
    .with_budget(direct.budget)
    .with_note(format!(
        "criterion holds: {holds}; direct member: {}",
        direct.member
    )))
}

fn difference_calculus(setup: &Setup) -> Vec<CheckRecord> {
    if let Some(r) = needs_units(setup) {
        return vec![r];
    }
    let alg = setup.coeffs.clone();
    let mut filt = FiltrationCache::new(&alg);
    // ratio sequences of length up to 4
    let battery = match diagonal_battery(&mut filt, 5, setup.config.seed, 4) {
        Ok(b) => b,
        Err(e) => return vec![CheckRecord::from_error("battery", "diagonal units", &e)],
    };
    let ratio_sets: Vec<(DiagKind, Vec<SparseVec>)> =
        battery.iter().map(|b| (b.kind, b.diag.ratios())).collect();
    let mut out = Vec::new();

    out.push(timed(|| {
        let mut t = Tally::new("table-recursion", "m_ij = m_{i,j-1} - m_{i+1,j}");
        for (idx, (_, ms)) in ratio_sets.iter().enumerate() {
            for l in 1..=ms.len() {
                let ok = DifferenceTable::new(&alg, &ms[..l])
                    .map(|t| t.recursion_holds())
                    .unwrap_or(false);
                t.check(ok, || format!("#{idx} l={l}"));
            }
        }
        t.finish()
    }));

    out.push(timed(|| {
        let mut t = Tally::new(
            "first-row",
            "first row of the table in the filtration iff the whole table is",
        );
        let (mut yes, mut no) = (0, 0);
        for (idx, (_, ms)) in ratio_sets.iter().enumerate() {
            for l in 1..=ms.len() {
                let Ok(table) = DifferenceTable::new(&alg, &ms[..l]) else {
                    t.check(false, || format!("#{idx} not units"));
                    continue;
                };
                let first = table.first_row_in_filtration(&mut filt);
                let all = table.all_in_filtration(&mut filt);
                if all {
                    yes += 1;
                } else {
                    no += 1;
                }
                t.check(first == all, || format!("#{idx} l={l}"));
            }
        }
        t.note(format!("{yes} in, {no} out"));
        t.finish()
    }));

    out.push(timed(|| {
        let mut t = Tally::new(
            "inverse-table",
            "table of m_i in the filtration iff table of m_i^{-1} is",
        );
        for (idx, (_, ms)) in ratio_sets.iter().enumerate() {
            let ok = inverse_table_check(&mut filt, ms)
                .map(|r| r.equivalent())
                .unwrap_or(false);
            t.check(ok, || format!("#{idx}"));
        }
        t.finish()
    }));

    out.push(timed(|| {
        let mut t = Tally::new("homogeneity-dm", "m u m^{-1} - u maps I_k into I_{k+1}");
        for (idx, (_, ms)) in ratio_sets.iter().enumerate() {
            for k in 0..=2 {
                let ok = homogeneity_check_dm(&mut filt, &ms[0], k).unwrap_or(false);
                t.check(ok, || format!("#{idx} k={k}"));
            }
        }
        t.finish()
    }));

    out.push(timed(|| {
        let mut t = Tally::new(
            "homogeneity-dij",
            "difference operators of the ratios raise the filtration degree",
        );
        for (idx, (kind, ms)) in ratio_sets.iter().enumerate() {
            if *kind != DiagKind::Solved {
                continue;
            }
            for j in 1..=ms.len().min(3) {
                for k in 0..=2 {
                    let ok = homogeneity_check_dij(&mut filt, ms, 1, j, k)
                        .map(|v| v.dij && v.upper)
                        .unwrap_or(false);
                    t.check(ok, || format!("#{idx} j={j} k={k}"));
                }
            }
        }
        t.finish()
    }));

    for n in [3, 4] {
        out.push(timed(|| {
            let mut t = Tally::new(
                &format!("expansion n={n}"),
                "conjugating u E and u F by a diagonal expands with signed difference derivatives",
            );
            let tctx = TensorContext::new(&alg, n);
            let mut f2 = FiltrationCache::new(&alg);
            let Ok(bat) = diagonal_battery(&mut f2, n, setup.config.seed, 1) else {
                return CheckRecord::new(format!("expansion n={n}"), "", Verdict::Unsupported);
            };
            let us: Vec<SparseVec> = ["x", "y", "x*y - 2*y*x"]
                .iter()
                .filter_map(|s| alg.parse(s).ok())
                .collect();
            let us = if us.is_empty() { alg.generators() } else { us };
            for (idx, b) in bat.iter().enumerate() {
                for u in &us {
                    for root in [Root::Raising, Root::Lowering] {
                        let ok = expansion_sign(&b.diag, u, &tctx, root)
                            .map(|s| s == Some(0))
                            .unwrap_or(false);
                        t.check(ok, || format!("#{idx} {root:?} u={}", alg.format(u)));
                    }
                }
            }
            t.finish()
        }));
    }

    out.push(timed(|| {
        let mut t = Tally::new(
            "u-prime",
            "difference of sandwiches equals the upper operator applied to f_{j+1} u f_{j+1}^{-1}",
        );
        let mut other = 0;
        let us = alg.generators();
        for (idx, b) in battery.iter().enumerate() {
            let n = b.diag.len();
            for j in 1..n {
                for u in &us {
                    match from_delta_to_d_check(&b.diag, u, 1, j) {
                        Ok(r) => {
                            if r.with_fj {
                                other += 1;
                            }
                            t.check(r.with_fj1, || format!("#{idx} j={j}"));
                        }
                        Err(_) => t.check(false, || format!("#{idx} j={j} error")),
                    }
                }
            }
        }
        t.note(format!("the f_j reading also held in {other} instances"));
        t.finish()
    }));
    out
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Report> {
    let suites = Suite::parse_list(&cfg.suite)?;
    let setup = Setup::new(cfg)?;
    let mut report = Report::new(cfg.clone());
    report.checks = run_suites(&setup, &suites);
    Ok(report)
}

/// Formats an element of `F ⊗ M_n` as a sum of `(f) e_ij`.
pub fn format_tensor(tctx: &TensorContext, v: &SparseVec) -> String {
    let n = tctx.size();
    let mut parts = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let e = tctx.entry(v, i, j);
            if !e.is_empty() {
                parts.push(format!(
                    "({}) e{}{}",
                    tctx.coeffs().format(&e),
                    i + 1,
                    j + 1
                ));
            }
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub const OBJECTS: &[&str] = &[
    "closure",
    "tilde",
    "overline",
    "fg",
    "enveloping",
    "commutator",
    "ik",
    "ikl",
    "gpower",
    "type2",
    "slform",
    "orthogonal",
    "abelian",
    "semisimple",
    "sl2form",
    "simplef",
];

/// Dimensions (and optionally bases) of one object. `k` is the filtration index or the
/// filtered-piece index, `l` the number of factors for `ikl`.
pub fn cmd_compute(cfg: &RunConfig, l: Option<usize>, with_basis: bool) -> Result<Report> {
    let setup = Setup::new(cfg)?;
    let object = cfg.object.clone().unwrap_or_else(|| "closure".into());
    let k = cfg.k;
    let need_k = || k.ok_or_else(|| Error::Config(format!("object '{object}' needs --k")));
    let mut cf = setup.closed_forms();
    let mut filt = FiltrationCache::new(&setup.coeffs);
    let n = setup.pair.size();
    // (subspace, lives in F rather than F ⊗ M_n)
    let (space, in_f) = match object.as_str() {
        "closure" => (lie_closure(&setup.pair, &setup.tctx, k), false),
        "tilde" => (cf.tilde_bound(k), false),
        "overline" => (cf.overline_bound(k), false),
        "fg" => (cf.fg(), false),
        "enveloping" => (cf.f_enveloping(need_k()?), false),
        "commutator" => (filt.commutator_space(need_k()?), true),
        "ik" => (filt.ideal_ik(need_k()?), true),
        "ikl" => {
            let l = l.ok_or_else(|| Error::Config("object 'ikl' needs --l".into()))?;
            if l == 0 {
                return Err(Error::Config("--l must be at least 1".into()));
            }
            (filt.ideal_ikl(need_k()?, l), true)
        }
        "gpower" => {
            let s = setup.pair.g_power(need_k()?);
            let mut report = Report::new(cfg.clone());
            report.objects.push(ObjectDump {
                name: format!("g^{}", need_k()?),
                dims: s.dim_profile(),
                total: s.dim(),
                basis: Vec::new(),
            });
            return Ok(report);
        }
        "type2" => (cf.type2_formula()?, false),
        "slform" => (cf.special_linear_form(), false),
        "orthogonal" => {
            let name = setup.pair.name();
            let phi = if name.starts_with("sp:") {
                form_phi1(n / 2)
            } else {
                form_phi0(n)
            };
            (cf.orthogonal_form(&phi)?, false)
        }
        "abelian" => (cf.abelian_currents_form(), false),
        "semisimple" => (cf.semisimple_closed_form()?, false),
        "sl2form" => (cf.sl2_closed_form()?, false),
        "simplef" => (cf.simple_f_form(), false),
        other => {
            return Err(Error::Config(format!(
                "unknown object '{other}', expected one of {}",
                OBJECTS.join(", ")
            )))
        }
    };
    let basis = if with_basis {
        space
            .basis()
            .iter()
            .map(|v| {
                if in_f {
                    setup.coeffs.format(v)
                } else {
                    format_tensor(&setup.tctx, v)
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    let label = match (object.as_str(), k, l) {
        ("ikl", Some(k), Some(l)) => format!("I_{k}^{l}"),
        ("ik", Some(k), _) => format!("I_{k}"),
        ("commutator", Some(k), _) => format!("F^({k})"),
        (o, Some(k), _) => format!("{o}[{k}]"),
        (o, None, _) => o.to_string(),
    };
    let mut report = Report::new(cfg.clone());
    report.objects.push(ObjectDump {
        name: label,
        dims: space.dim_profile(),
        total: space.dim(),
        basis,
    });
    Ok(report)
}

/// Evaluates the Cartan criteria, direct membership and the conjugation probe on one diagonal.
pub fn cmd_cartan(cfg: &RunConfig) -> Result<Report> {
    let text = cfg
        .diag
        .clone()
        .ok_or_else(|| Error::Config("cartan needs --diag".into()))?;
    let setup = Setup::new(cfg)?;
    if let Some(r) = needs_units(&setup) {
        let mut report = Report::new(cfg.clone());
        report.checks.push(r);
        return Ok(report);
    }
    let d = DiagonalUnit::parse(&setup.coeffs, &text)?;
    if d.len() != setup.pair.size() {
        return Err(Error::Config(format!(
            "diagonal has {} entries, pair needs {}",
            d.len(),
            setup.pair.size()
        )));
    }
    let g = d.to_tensor(&setup.tctx);
    let closure = setup.closure();
    let direct = in_group_direct(&g, &setup.pair, &setup.tctx, closure);
    let mut report = Report::new(cfg.clone());
    let mut filt = FiltrationCache::new(&setup.coeffs);
    for (crit, name, anchor) in [
        (
            Criterion::Classical,
            "classical-criterion",
            "Cartan criterion for classical pairs",
        ),
        (
            Criterion::Sl2,
            "sl2-criterion",
            "Cartan criterion for sl_2 pairs",
        ),
    ] {
        let rec = timed(|| {
            if !crit.applies(&setup.pair) {
                return CheckRecord::new(name, anchor, Verdict::Vacuous)
                    .with_note("criterion does not apply to this pair");
            }
            let holds = match crit.evaluate(&d, &mut filt) {
                Ok(h) => h,
                Err(e) => return CheckRecord::from_error(name, anchor, &e),
            };
            match &direct {
                Ok(dv) => CheckRecord::new(name, anchor, Verdict::from_bool(holds == dv.member))
                    .with_budget(dv.budget)
                    .with_note(format!(
                        "criterion holds: {holds}; direct member: {}",
                        dv.member
                    )),
                Err(e) => CheckRecord::from_error(name, anchor, e)
                    .with_note(format!("criterion holds: {holds}; {e}")),
            }
        });
        report.checks.push(rec);
    }
    report.checks.push(timed(|| {
        let anchor = "conjugating 1 g alone decides membership";
        match conjecture_probe(&g, &setup.pair, &setup.tctx, closure) {
            Ok(p) => CheckRecord::new("constant-probe", anchor, Verdict::from_bool(p.agree))
                .with_budget(p.budget)
                .with_note(format!(
                    "probe: {}; direct member: {}",
                    p.conjectural, p.direct
                )),
            Err(e) => CheckRecord::from_error("constant-probe", anchor, &e),
        }
    }));
    Ok(report)
}

/// Dispatches on the configured command.
pub fn run(cfg: &RunConfig, l: Option<usize>, with_basis: bool) -> Result<Report> {
    match cfg.command {
        Command::Verify => cmd_verify(cfg),
        Command::Compute => cmd_compute(cfg, l, with_basis),
        Command::Cartan => cmd_cartan(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(pair: &str, deg: usize, unital: bool, suite: &str) -> RunConfig {
        let mut c = RunConfig::new(Command::Verify, pair);
        c.deg = deg;
        c.unital = unital;
        c.suite = suite.into();
        c
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!(Suite::parse_list("all").unwrap().len(), 7);
        assert_eq!(
            Suite::parse_list("bounds-chain,cartan-sl2").unwrap(),
            vec![Suite::BoundsChain, Suite::CartanSl2]
        );
        assert!(Suite::parse_list("bogus").is_err());
    }

    #[test]
    fn small_verify_passes() {
        let r = cmd_verify(&cfg(
            "sl:2",
            3,
            false,
            "filtration-identities,bounds-chain,closed-forms",
        ))
        .unwrap();
        assert_eq!(r.count(Verdict::Fail), 0, "{}", r.to_text());
        assert!(r.count(Verdict::Pass) > 5);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn nonunital_cartan_is_unsupported() {
        let r = cmd_verify(&cfg("sl2irrep:3", 3, false, "cartan-sl2")).unwrap();
        assert_eq!(r.exit_code(), 3);
    }

    #[test]
    fn compute_first_ideal() {
        let mut c = cfg("sl:2", 3, false, "all");
        c.command = Command::Compute;
        c.object = Some("ik".into());
        c.k = Some(1);
        let r = cmd_compute(&c, None, true).unwrap();
        assert_eq!(r.objects[0].dims, vec![0, 0, 1, 4]);
        assert_eq!(r.objects[0].basis.len(), 5);
    }

    #[test]
    fn cartan_command() {
        let mut c = cfg("sl2irrep:3", 3, true, "all");
        c.command = Command::Cartan;
        c.diag = Some("1 ; 1 ; 1+[x,y]".into());
        let r = cmd_cartan(&c).unwrap();
        assert_eq!(r.exit_code(), 0, "{}", r.to_text());
        assert!(r.checks[1]
            .note
            .as_deref()
            .unwrap()
            .contains("criterion holds: true"));
        c.diag = Some("1 ; 1".into());
        assert!(cmd_cartan(&c).is_err());
    }
}
