//! Randomized property suites shared by the integration and acceptance tests.
//! Each runs until it has seen `want` qualifying instances (or gives up after
//! `want * 200` draws) and reports what it found.

use std::fmt;

use gct_core::cat_ops::GluingViolation;
use gct_core::environment::check_gluing;
use gct_core::gct::{find_coherent_cone_systems, run_pipeline};
use gct_core::{
    build_delta_category, enumerate_homomorphisms, ConeMode, DeltaCategory, Environment, GctOutcome, RuleKind,
};

use crate::gen::{instance, rng, Instance};
use crate::oracle::{after, all_homs, gluing_holds};
use crate::{audit_delta, audit_result, spans_iso, Audit};

/// Δ with more objects than this is skipped by the suites.
pub const MAX_DELTA: usize = 12;

#[derive(Debug, Default, Clone)]
pub struct Report {
    pub instances: usize,
    /// Instances that exercise more than the trivial case.
    pub nontrivial: usize,
    pub checks: usize,
    pub failed: usize,
    /// The first few failures.
    pub failures: Vec<String>,
    pub audit: Audit,
}

impl Report {
    pub fn passed(&self, want: usize) -> bool {
        self.instances >= want && self.failed == 0 && self.audit.ok()
    }

    fn fail(&mut self, seed: u64, what: impl fmt::Display) {
        self.failed += 1;
        if self.failures.len() < 5 {
            self.failures.push(format!("seed {seed}: {what}"));
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} instances ({} nontrivial), {} checks, {} failures, oracle {}/{} skipped {}",
            self.instances,
            self.nontrivial,
            self.checks,
            self.failed,
            self.audit.checked - self.audit.failures.len(),
            self.audit.checked,
            self.audit.skipped,
        )
    }
}

fn delta_of(inst: &Instance) -> Option<DeltaCategory> {
    let d = build_delta_category(&inst.system, &inst.g, &Environment::new(inst.big.kind)).ok()?;
    (d.objects().len() <= MAX_DELTA).then_some(d)
}

fn drive(kind: RuleKind, want: usize, seed: u64, mut each: impl FnMut(u64, &Instance, &mut Report) -> bool) -> Report {
    let mut report = Report::default();
    let mut r = rng(seed ^ (kind as u64) << 32);
    for draw in 0..want * 200 {
        if report.instances >= want {
            break;
        }
        let inst = instance(&mut r, kind);
        if each(seed.wrapping_add(draw as u64), &inst, &mut report) {
            report.instances += 1;
        }
    }
    report
}

/// Δ with a terminal object is coherent and its result is that object's
/// result; the same holds for the restriction to the terminal object and
/// one other object.
pub fn terminal_collapse(kind: RuleKind, want: usize, seed: u64, audit: bool) -> Report {
    drive(kind, want, seed, |s, inst, rep| {
        let Some(delta) = delta_of(inst) else { return false };
        let Some(t) = delta.terminal_object() else { return false };
        let top = delta.object(t).clone();
        let expect = (&top.f, &top.g);
        let check = |d: &DeltaCategory, label: &str, rep: &mut Report| {
            rep.checks += 1;
            match run_pipeline(d, ConeMode::All) {
                Ok(GctOutcome::Coherent(results)) => {
                    for res in &results {
                        if !spans_iso((res.f(), res.h()), expect) {
                            rep.fail(s, format!("{label}: result differs from the terminal transformation"));
                        }
                        if audit {
                            rep.audit.merge(audit_result(d, res));
                        }
                    }
                }
                Ok(GctOutcome::NotCoherent) => rep.fail(s, format!("{label}: not coherent")),
                Err(e) => rep.fail(s, format!("{label}: {e}")),
            }
        };
        check(&delta, "Δ", rep);
        if audit {
            rep.audit.merge(audit_delta(&delta));
        }
        if delta.objects().len() > 1 {
            rep.nontrivial += 1;
            let top_name = delta.objects()[t].name.clone();
            let other = delta.objects().iter().position(|o| o.name != top_name).expect("two objects");
            let pair = [delta.objects()[other].name.clone(), top_name.clone()];
            let two = delta.restrict(&pair).expect("known names");
            let one = delta.restrict(&[top_name]).expect("known name");
            check(&two, "{δ, δ'}", rep);
            check(&one, "{δ'}", rep);
        }
        true
    })
}

/// Every morphism of Δ carries the only `d` satisfying its conditions.
pub fn unique_d(kind: RuleKind, want: usize, seed: u64) -> Report {
    drive(kind, want, seed, |_, inst, rep| {
        let Some(delta) = delta_of(inst) else { return false };
        if delta.non_identities().next().is_none() {
            return false;
        }
        rep.nontrivial += 1;
        let a = audit_delta(&delta);
        rep.checks += a.checked;
        rep.audit.merge(a);
        true
    })
}

/// Matches of the larger rule that satisfy the gluing condition, and
/// whether the induced match of the subrule does too. `gc1_only` restricts
/// the check to identification.
pub fn gluing_inheritance(kind: RuleKind, want: usize, seed: u64, gc1_only: bool) -> Report {
    drive(kind, want, seed, |s, inst, rep| {
        if !inst.sigma.s1.is_injective() {
            return false;
        }
        let mut any = false;
        for m in enumerate_homomorphisms(inst.big.lhs(), &inst.g, kind.is_mono()) {
            if !check_gluing(&m, &inst.big).is_empty() {
                continue;
            }
            any = true;
            rep.checks += 1;
            let induced = after(&m, &inst.sigma.s1);
            let found: Vec<GluingViolation> = check_gluing(&induced, &inst.small)
                .into_iter()
                .filter(|v| !gc1_only || v.clause() == "GC1")
                .collect();
            if found.is_empty() != gluing_holds(&induced, &inst.small.l) && !gc1_only {
                rep.fail(s, "library and oracle disagree on the gluing condition");
            }
            if let Some(v) = found.first() {
                rep.fail(s, format!("induced match fails {}", v.clause()));
            }
        }
        any
    })
}

/// Every transformation of a rule has, for every rule morphism into that
/// rule, an induced morphism in Δ.
pub fn right_fullness(kind: RuleKind, want: usize, seed: u64) -> Report {
    drive(kind, want, seed, |s, inst, rep| {
        let Some(delta) = delta_of(inst) else { return false };
        let big = delta
            .objects()
            .iter()
            .enumerate()
            .filter(|(_, o)| o.transformation.rule == inst.big)
            .map(|(i, _)| i)
            .collect::<Vec<_>>();
        if big.is_empty() {
            return false;
        }
        rep.nontrivial += 1;
        for &t in &big {
            for sigma in inst.system.morphisms().iter().filter(|m| m.dst == inst.big) {
                rep.checks += 1;
                let hit = delta
                    .morphisms()
                    .iter()
                    .any(|m| m.dst == t && m.mu.sigma.same_maps(sigma));
                if !hit {
                    rep.fail(s, format!("no morphism over {} into {}", sigma.name, delta.objects()[t].name));
                }
            }
        }
        true
    })
}

/// With no non-identity morphisms, coherent cone systems are exactly the
/// independent choices of one leg per ordered pair of objects.
pub fn discrete_cones(kind: RuleKind, want: usize, seed: u64) -> Report {
    drive(kind, want, seed, |s, inst, rep| {
        let Some(delta) = delta_of(inst) else { return false };
        let Ok(d) = delta.restrict(&discrete_names(&delta)) else { return false };
        if d.objects().len() < 2 || d.objects().len() > 4 {
            return false;
        }
        let mut expected: usize = 1;
        for i in 0..d.objects().len() {
            for j in 0..d.objects().len() {
                if i == j {
                    continue;
                }
                let (a, b) = (d.object(i), d.object(j));
                let chi = after(&a.f, &a.k);
                expected *= all_homs(a.rule.interface(), b.context())
                    .iter()
                    .filter(|x| after(&b.f, x).vmap() == chi.vmap() && after(&b.f, x).emap() == chi.emap())
                    .count();
            }
        }
        if expected > 2000 {
            return false;
        }
        rep.nontrivial += 1;
        rep.checks += 1;
        let found = find_coherent_cone_systems(&d, ConeMode::All).len();
        if found != expected {
            rep.fail(s, format!("{found} cone systems, expected {expected}"));
        }
        true
    })
}

/// Objects of the larger rule only. The generated systems have no
/// morphisms into that rule besides its identity, so this is discrete.
fn discrete_names(delta: &DeltaCategory) -> Vec<String> {
    delta
        .objects()
        .iter()
        .filter(|o| o.transformation.rule.name == "big")
        .map(|o| o.name.clone())
        .collect()
}
