//! Fragment registry and decision routes.
//!
//! Every route works on the syntactic monoid of the input language. Its
//! restriction to non-empty words is the syntactic semigroup of `L ∩ A^+`,
//! so the verdicts concern `L ∩ A^+`; whether the empty word belongs to `L`
//! is reported separately.

mod report;

use std::collections::BTreeMap;
use std::sync::Arc;

pub use report::{
    EdgeValue, ElementRef, EvidenceReport, IdentityRow, IdentityStatus, ObjectValue, VariableValue,
    Verdict, Witness, SCHEMA_VERSION,
};

use crate::automata::{enrich, Dfa};
use crate::category::{
    check_path_equations, derived_category, idempotents_category, knast_equation, PathEquation,
    PathVerdict,
};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::semigroup::{
    check_identity, IdentitySet, IdentityVerdict, SyntacticPresentation, BUILTIN_IDENTITY_SETS,
};
use crate::stability::StabilityRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Identities on the stable monoid, at modulus `s`.
    StableMonoid,
    /// Identities on every local monoid `eT_se`, at modulus `s`.
    LocalOfStableSemigroup,
    /// Path equations on `C_{k s}`.
    DerivedCategory,
    /// Work on `L_s = enrich(L, s)`.
    Reduction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquationSource {
    /// A built-in identity set.
    Identities(&'static str),
    /// Knast's path equation.
    Knast,
    /// Equations supplied in a file; without one the route stops early.
    File,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FragmentEntry {
    pub name: String,
    pub route: Route,
    pub equations: EquationSource,
    pub delay_multiplier: u32,
}

/// Fragment names accepted by [`registry_entry`]. Names containing `_k`
/// take the level from `--k` (or written inline, as in `FO2_3[Reg]`).
pub const FRAGMENT_NAMES: &[&str] = &[
    "FO[<,MOD]",
    "FO[Reg]",
    "FO2[<,MOD]",
    "FO2[Reg]",
    "FO1[MOD]",
    "BS1[<,MOD]",
    "BS1[Reg]",
    "FO[+1,MOD]",
    "FO[=,MOD]",
    "FO2_k[<,MOD]",
    "FO2_k[Reg]",
    "BS_k[Reg]",
];

/// Splits `FO2_3[Reg]` or `FO2_k[Reg]` into the family and its level.
fn leveled(name: &str, prefix: &str, k: Option<u32>) -> Result<Option<(String, u32)>> {
    let Some(rest) = name.strip_prefix(prefix) else {
        return Ok(None);
    };
    let Some(open) = rest.find('[') else {
        return Ok(None);
    };
    let (level, sig) = rest.split_at(open);
    let k = match level {
        "k" => k.ok_or_else(|| Error::invalid(format!("{name} needs --k")))?,
        digits => match digits.parse::<u32>() {
            Ok(n) => {
                if k.is_some_and(|k| k != n) {
                    return Err(Error::invalid(format!(
                        "{name} conflicts with --k {}",
                        k.unwrap()
                    )));
                }
                n
            }
            Err(_) => return Ok(None),
        },
    };
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    Ok(Some((sig.to_string(), k)))
}

/// Looks up a fragment by its command-line name.
pub fn registry_entry(name: &str, k: Option<u32>) -> Result<FragmentEntry> {
    let entry = |name: &str, route, equations, delay_multiplier| FragmentEntry {
        name: name.to_string(),
        route,
        equations,
        delay_multiplier,
    };
    use EquationSource::*;
    use Route::*;
    Ok(match name {
        "FO[<,MOD]" | "FO[Reg]" => entry(name, StableMonoid, Identities("A"), 1),
        "FO2[<,MOD]" => entry(name, StableMonoid, Identities("DA"), 1),
        // Letter predicates only, no order between variables.
        "FO1[MOD]" => entry(name, StableMonoid, Identities("J1"), 1),
        "FO2[Reg]" => entry(name, LocalOfStableSemigroup, Identities("DA"), 1),
        "BS1[<,MOD]" => entry(name, DerivedCategory, Knast, 2),
        "FO[=,MOD]" => entry(name, DerivedCategory, File, 2),
        "BS1[Reg]" => entry(name, Reduction, Knast, 1),
        "FO[+1,MOD]" => entry(name, Reduction, Identities("FO[+1]"), 1),
        _ => {
            if let Some((sig, k)) = leveled(name, "FO2_", k)? {
                match sig.as_str() {
                    "[<,MOD]" => entry(&format!("FO2_{k}[<,MOD]"), DerivedCategory, File, 2 * k),
                    "[Reg]" => entry(&format!("FO2_{k}[Reg]"), Reduction, File, 1),
                    _ => return Err(Error::UnknownFragment(name.to_string())),
                }
            } else if let Some((sig, k)) = leveled(name, "BS_", k)? {
                match (sig.as_str(), k) {
                    ("[Reg]", 1) => entry("BS1[Reg]", Reduction, Knast, 1),
                    ("[Reg]", k) => entry(&format!("BS_{k}[Reg]"), Reduction, File, 1),
                    _ => return Err(Error::UnknownFragment(name.to_string())),
                }
            } else {
                return Err(Error::UnknownFragment(name.to_string()));
            }
        }
    })
}

/// Inputs shared by all routes.
struct Prepared {
    pres: Arc<SyntacticPresentation>,
    stability: StabilityRecord,
    epsilon: bool,
}

impl Prepared {
    fn new(dfa: &Dfa, limits: &Limits) -> Result<Prepared> {
        let pres = Arc::new(SyntacticPresentation::syntactic_morphism(dfa, limits)?);
        let stability = StabilityRecord::compute(&pres)?;
        Ok(Prepared {
            pres,
            stability,
            epsilon: dfa.accepts_empty(),
        })
    }

    fn s(&self) -> u32 {
        self.stability.index() as u32
    }

    fn report(
        &self,
        verdict: Verdict,
        fragment: Option<&str>,
        modulus: Option<u32>,
    ) -> EvidenceReport {
        let mut sizes = BTreeMap::new();
        sizes.insert("syntactic_monoid".to_string(), self.pres.size());
        sizes.insert(
            "stable_monoid".to_string(),
            self.stability.stable_monoid().len(),
        );
        EvidenceReport {
            schema_version: SCHEMA_VERSION,
            verdict,
            fragment: fragment.map(str::to_string),
            stability_index: self.stability.index(),
            modulus,
            sizes,
            witness: None,
            epsilon_in_language: self.epsilon,
            reduced_instance: None,
            identities: Vec::new(),
        }
    }
}

fn verdict_of(holds: bool) -> Verdict {
    if holds {
        Verdict::Definable
    } else {
        Verdict::NotDefinable
    }
}

/// Syntactic monoid size, stability index, stable parts, idempotents and
/// the built-in identity sets satisfied by the syntactic and stable monoids.
pub fn analyze(dfa: &Dfa, limits: &Limits) -> Result<EvidenceReport> {
    let p = Prepared::new(dfa, limits)?;
    let mut report = p.report(Verdict::Informational, None, Some(p.s()));
    let pres = &p.pres;
    report
        .sizes
        .insert("syntactic_semigroup".into(), pres.semigroup_part().len());
    report.sizes.insert(
        "stable_semigroup".into(),
        p.stability.stable_semigroup().len(),
    );
    report
        .sizes
        .insert("idempotents".into(), pres.idempotents(None).len());
    let status = |checked: Result<IdentityVerdict>| -> Result<IdentityStatus> {
        Ok(match checked {
            Ok(IdentityVerdict::Holds) => IdentityStatus::Holds,
            Ok(IdentityVerdict::Fails(_)) => IdentityStatus::Fails,
            Err(Error::Guard { .. }) => IdentityStatus::Skipped,
            Err(e) => return Err(e),
        })
    };
    for name in BUILTIN_IDENTITY_SETS {
        let ids = IdentitySet::builtin(name).expect("built-in");
        let whole = status(check_identity(pres, &ids, None, limits))?;
        let stable = status(check_identity(
            pres,
            &ids,
            Some(p.stability.stable_monoid()),
            limits,
        ))?;
        report.identities.push(IdentityRow {
            identities: name.to_string(),
            syntactic_monoid: whole,
            stable_monoid: stable,
        });
    }
    Ok(report)
}

/// Definable iff the stable monoid satisfies `ids`.
pub fn decide_stable_monoid_in(
    dfa: &Dfa,
    ids: &IdentitySet,
    limits: &Limits,
) -> Result<EvidenceReport> {
    let p = Prepared::new(dfa, limits)?;
    stable_monoid_route(&p, ids, limits, None)
}

fn stable_monoid_route(
    p: &Prepared,
    ids: &IdentitySet,
    limits: &Limits,
    fragment: Option<&str>,
) -> Result<EvidenceReport> {
    let verdict = check_identity(&p.pres, ids, Some(p.stability.stable_monoid()), limits)?;
    let mut report = p.report(verdict_of(verdict.holds()), fragment, Some(p.s()));
    report.witness = verdict
        .witness()
        .map(|w| Witness::identity(&p.pres, ids, w, None));
    Ok(report)
}

/// Definable iff every local monoid `eTe` of the stable semigroup `T`
/// satisfies `ids`.
pub fn decide_local_of_stable_semigroup_in(
    dfa: &Dfa,
    ids: &IdentitySet,
    limits: &Limits,
) -> Result<EvidenceReport> {
    let p = Prepared::new(dfa, limits)?;
    local_route(&p, ids, limits, None)
}

fn local_route(
    p: &Prepared,
    ids: &IdentitySet,
    limits: &Limits,
    fragment: Option<&str>,
) -> Result<EvidenceReport> {
    let t = p.stability.stable_semigroup();
    let idempotents = p.pres.idempotents(Some(t));
    let mut report = p.report(Verdict::Definable, fragment, Some(p.s()));
    report.sizes.insert("stable_semigroup".into(), t.len());
    report
        .sizes
        .insert("stable_idempotents".into(), idempotents.len());
    for e in idempotents.iter() {
        let local = p.pres.local_monoid(e, Some(t))?;
        if let IdentityVerdict::Fails(w) = check_identity(&p.pres, ids, Some(&local), limits)? {
            report.verdict = Verdict::NotDefinable;
            report.witness = Some(Witness::identity(&p.pres, ids, &w, Some(e)));
            break;
        }
    }
    Ok(report)
}

/// Definable iff `C_{k s}` satisfies every equation of `eqs`.
pub fn decide_via_derived_category(
    dfa: &Dfa,
    eqs: &[PathEquation],
    k: u32,
    limits: &Limits,
) -> Result<EvidenceReport> {
    let p = Prepared::new(dfa, limits)?;
    derived_route(&p, eqs, k, limits, None)
}

fn derived_route(
    p: &Prepared,
    eqs: &[PathEquation],
    k: u32,
    limits: &Limits,
    fragment: Option<&str>,
) -> Result<EvidenceReport> {
    if eqs.is_empty() {
        return Err(Error::invalid("no path equation to check"));
    }
    if k == 0 {
        return Err(Error::invalid("delay multiplier must be positive"));
    }
    let d = k
        .checked_mul(p.s())
        .ok_or_else(|| Error::invalid("modulus overflows"))?;
    let c = derived_category(&p.pres, d)?;
    let verdict = check_path_equations(&c, eqs, limits)?;
    let mut report = p.report(verdict_of(verdict.holds()), fragment, Some(d));
    report
        .sizes
        .insert("derived_category_arrows".into(), c.arrow_count());
    if let PathVerdict::Fails(w) = &verdict {
        report.witness = Some(Witness::path(&format!("C_{d}"), &c, eqs, w));
    }
    Ok(report)
}

/// The automaton of `L_s` over the enriched alphabet, with `s`.
pub fn reduce(dfa: &Dfa, limits: &Limits) -> Result<EvidenceReport> {
    let p = Prepared::new(dfa, limits)?;
    let (enriched, _) = enriched_instance(&p, dfa, limits, false)?;
    let mut report = p.report(Verdict::ReducedInstanceEmitted, None, Some(p.s()));
    report
        .sizes
        .insert("enriched_dfa_states".into(), enriched.state_count());
    report.reduced_instance = Some(enriched.to_text());
    Ok(report)
}

fn enriched_instance(
    p: &Prepared,
    dfa: &Dfa,
    limits: &Limits,
    with_semigroup: bool,
) -> Result<(Dfa, Option<Arc<SyntacticPresentation>>)> {
    let letters = dfa.alphabet().len() as u128 * p.s() as u128;
    if letters > limits.max_enriched_letters as u128 {
        return Err(Error::Guard {
            what: "enriched alphabet letters",
            actual: letters,
            cap: limits.max_enriched_letters as u128,
            flag: "--max-enriched-letters",
        });
    }
    let enriched = enrich(dfa, p.s())?.minimize();
    let t = if with_semigroup {
        Some(Arc::new(SyntacticPresentation::syntactic_morphism(
            &enriched, limits,
        )?))
    } else {
        None
    };
    Ok((enriched, t))
}

/// Works on `L_s = enrich(L, s)` and its syntactic semigroup `T`:
/// Knast's equation on the idempotents' category of `T` for `BS1[Reg]`,
/// the `FO[+1]` identity on `T` for `FO[+1,MOD]`, supplied equations on the
/// idempotents' category otherwise. Without equations, the automaton of
/// `L_s` is emitted for an external decision procedure.
pub fn decide_via_reduction(
    dfa: &Dfa,
    fragment: &FragmentEntry,
    equations: Option<&[PathEquation]>,
    limits: &Limits,
) -> Result<EvidenceReport> {
    let p = Prepared::new(dfa, limits)?;
    reduction_route(&p, dfa, fragment, equations, limits)
}

fn reduction_route(
    p: &Prepared,
    dfa: &Dfa,
    fragment: &FragmentEntry,
    equations: Option<&[PathEquation]>,
    limits: &Limits,
) -> Result<EvidenceReport> {
    let name = Some(fragment.name.as_str());
    let s = p.s();
    if fragment.equations == EquationSource::File && equations.is_none() {
        let (enriched, _) = enriched_instance(p, dfa, limits, false)?;
        let mut report = p.report(Verdict::ReducedInstanceEmitted, name, Some(s));
        report
            .sizes
            .insert("enriched_dfa_states".into(), enriched.state_count());
        report.reduced_instance = Some(enriched.to_text());
        return Ok(report);
    }
    let (enriched, t) = enriched_instance(p, dfa, limits, true)?;
    let t = t.expect("semigroup requested");
    let mut report = p.report(Verdict::Definable, name, Some(s));
    report
        .sizes
        .insert("enriched_dfa_states".into(), enriched.state_count());
    report
        .sizes
        .insert("enriched_semigroup".into(), t.semigroup_part().len());
    match &fragment.equations {
        EquationSource::Identities(set) => {
            let ids = IdentitySet::builtin(set).expect("registry names built-in sets");
            let verdict = check_identity(&t, &ids, Some(t.semigroup_part()), limits)?;
            report.verdict = verdict_of(verdict.holds());
            report.witness = verdict
                .witness()
                .map(|w| Witness::identity(&t, &ids, w, None));
        }
        source => {
            let knast;
            let eqs = match source {
                EquationSource::Knast => {
                    knast = [knast_equation()];
                    &knast[..]
                }
                _ => equations.expect("checked above"),
            };
            let c = idempotents_category(&t, Some(t.semigroup_part()))?;
            report
                .sizes
                .insert("idempotents_category_objects".into(), c.object_count());
            let verdict = check_path_equations(&c, eqs, limits)?;
            report.verdict = verdict_of(verdict.holds());
            if let PathVerdict::Fails(w) = &verdict {
                report.witness = Some(Witness::path("S_E", &c, eqs, w));
            }
        }
    }
    Ok(report)
}

/// Options for [`decide`].
#[derive(Clone, Debug, Default)]
pub struct DecideOptions {
    pub k: Option<u32>,
    pub equations: Option<Vec<PathEquation>>,
    pub limits: Limits,
}

/// Decides definability of `dfa` in the named fragment.
pub fn decide(dfa: &Dfa, fragment: &str, options: &DecideOptions) -> Result<EvidenceReport> {
    let entry = registry_entry(fragment, options.k)?;
    if options.equations.is_some() && entry.equations != EquationSource::File {
        return Err(Error::invalid(format!(
            "{} uses built-in equations; drop --equations",
            entry.name
        )));
    }
    let limits = &options.limits;
    let p = Prepared::new(dfa, limits)?;
    let name = Some(entry.name.as_str());
    match entry.route {
        Route::StableMonoid | Route::LocalOfStableSemigroup => {
            let EquationSource::Identities(set) = entry.equations else {
                unreachable!("local routes use identities")
            };
            let ids = IdentitySet::builtin(set).expect("registry names built-in sets");
            if entry.route == Route::StableMonoid {
                stable_monoid_route(&p, &ids, limits, name)
            } else {
                local_route(&p, &ids, limits, name)
            }
        }
        Route::DerivedCategory => {
            let knast;
            let eqs: &[PathEquation] = match &entry.equations {
                EquationSource::Knast => {
                    knast = [knast_equation()];
                    &knast
                }
                _ => options
                    .equations
                    .as_deref()
                    .ok_or_else(|| Error::MissingEquations(entry.name.clone()))?,
            };
            derived_route(&p, eqs, entry.delay_multiplier, limits, name)
        }
        Route::Reduction => reduction_route(&p, dfa, &entry, options.equations.as_deref(), limits),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{Alphabet, Regex};

    fn dfa(re: &str) -> Dfa {
        Regex::parse(re)
            .unwrap()
            .to_dfa(Some(&Alphabet::from_chars("ab").unwrap()))
            .unwrap()
    }

    fn run(re: &str, fragment: &str) -> EvidenceReport {
        decide(&dfa(re), fragment, &DecideOptions::default()).unwrap()
    }

    #[test]
    fn registry_names() {
        for name in FRAGMENT_NAMES {
            let r = registry_entry(name, Some(2));
            assert!(r.is_ok(), "{name}");
        }
        assert_eq!(
            registry_entry("FO2_k[<,MOD]", Some(3))
                .unwrap()
                .delay_multiplier,
            6
        );
        assert_eq!(
            registry_entry("FO2_3[<,MOD]", None).unwrap().name,
            "FO2_3[<,MOD]"
        );
        assert_eq!(
            registry_entry("BS_1[Reg]", None).unwrap().equations,
            EquationSource::Knast
        );
        assert!(registry_entry("FO2_k[Reg]", None).is_err());
        assert!(matches!(
            registry_entry("MSO", None),
            Err(Error::UnknownFragment(_))
        ));
    }

    #[test]
    fn knast_counterexample() {
        let r = run("(aa)*ab(bb)*", "BS1[<,MOD]");
        assert_eq!(r.verdict, Verdict::NotDefinable);
        assert_eq!(r.stability_index, 4);
        assert_eq!(r.modulus, Some(8));
        assert!(r.witness.is_some());
    }

    #[test]
    fn trivial_language_everywhere() {
        for name in [
            "FO[<,MOD]",
            "FO2[Reg]",
            "BS1[<,MOD]",
            "BS1[Reg]",
            "FO[+1,MOD]",
            "FO1[MOD]",
        ] {
            assert_eq!(run("(a|b)*", name).verdict, Verdict::Definable, "{name}");
        }
    }

    #[test]
    fn pluggable_fragments() {
        let d = dfa("a(a|b)*");
        assert!(matches!(
            decide(&d, "FO[=,MOD]", &DecideOptions::default()),
            Err(Error::MissingEquations(_))
        ));
        let r = decide(
            &d,
            "BS_k[Reg]",
            &DecideOptions {
                k: Some(2),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::ReducedInstanceEmitted);
        let text = r.reduced_instance.unwrap();
        assert!(Dfa::from_text(&text).unwrap().alphabet().is_enriched());
    }

    #[test]
    fn reports_round_trip() {
        let r = run("(aa)*ab(bb)*", "BS1[<,MOD]");
        assert_eq!(EvidenceReport::from_json(&r.to_json()).unwrap(), r);
        let a = analyze(&dfa("(aa)*ab(bb)*"), &Limits::default()).unwrap();
        assert_eq!(EvidenceReport::from_json(&a.to_json_pretty()).unwrap(), a);
        assert!(a.render_text().contains("stability index: 4"));
    }
}
