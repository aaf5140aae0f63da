//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if
//! any fails.

mod support;

use std::collections::HashSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use lexrule::feature::FeatureStructure;
use lexrule::lexicon::{bundled, spec_of, EntryKey};
use lexrule::rules::{causer_var, SubcatFrame};
use lexrule::{CompileOptions, Engine, Grammar, LexicalEntry, Mode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use support::*;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn experiment(name: &str, max_caus: u8) -> Grammar {
    let dir = format!("{}/../../grammar/experiments/{name}", env!("CARGO_MANIFEST_DIR"));
    Grammar::load_dir(dir).expect("experiment grammar").with_options(CompileOptions {
        max_caus,
        ..CompileOptions::default()
    })
}

fn paradigm_combinatorics() -> Outcome {
    let start = Instant::now();
    let nominal = experiment("nominal3", 2).compile().map_err(|e| e.to_string())?;
    let nominal_time = start.elapsed();
    let start = Instant::now();
    let verbal = experiment("verbal8", 1).compile().map_err(|e| e.to_string())?;
    let verbal_time = start.elapsed();
    check(nominal.entry_count() == 8, format!("nominal: {} entries", nominal.entry_count()))?;
    check(verbal.entry_count() == 256, format!("verbal: {} entries", verbal.entry_count()))?;
    check(
        nominal_time < Duration::from_secs(1) && verbal_time < Duration::from_secs(1),
        format!("too slow: {nominal_time:?}, {verbal_time:?}"),
    )?;
    Ok(format!("8 and 256 entries in {nominal_time:.2?} / {verbal_time:.2?}"))
}

fn lexicon_blow_up(g: &Arc<Grammar>) -> Outcome {
    let start = Instant::now();
    let compiled = Engine::new(g.clone(), Mode::Compiled).map_err(|e| e.to_string())?;
    let build = start.elapsed();
    let runtime = Engine::new(g.clone(), Mode::Runtime).map_err(|e| e.to_string())?;
    for w in bundled::WORDS.lines().filter(|l| !l.starts_with('%')) {
        runtime.analyze(w).map_err(|e| e.to_string())?;
    }
    let n = compiled.resident_count();
    check(n >= 1000, format!("{n} compiled entries"))?;
    check(runtime.resident_count() == 40, format!("{} resident at runtime", runtime.resident_count()))?;
    check(build < Duration::from_secs(60), format!("build took {build:?}"))?;
    Ok(format!("{n} compiled entries vs 40 resident roots, built in {build:.2?}"))
}

const GOLD: [&str; 10] = [
    "arabada",
    "yolcu",
    "şekerci",
    "sabahçı",
    "kitabı",
    "çağırttı",
    "bildirilmemişti",
    "kurusu",
    "yaşlılar",
    "yürürken",
];

fn gold_forms(g: &Grammar) -> Outcome {
    for w in GOLD {
        let found = g.analyze(w).map_err(|e| e.to_string())?;
        check(!found.is_empty(), format!("{w}: no analysis"))?;
        for e in &found {
            let forms = g.generate(&e.root, &spec_of(e)).map_err(|e| e.to_string())?;
            check(forms.iter().any(|f| f == w), format!("{w}: generate gave {forms:?}"))?;
        }
    }
    let direct = [
        ("yol", "deriv=CI", "yolcu"),
        ("şeker", "deriv=CI", "şekerci"),
        ("sabah", "deriv=CI", "sabahçı"),
        ("araba", "case=locative", "arabada"),
        ("çağır", "caus+past.3sg", "çağırttı"),
        ("bil", "caus,pass,neg,asp=perf,tense=past", "bildirilmemişti"),
        ("kuru", "subst,poss=p3sg", "kurusu"),
        ("yaş", "deriv=lI,subst,plu", "yaşlılar"),
        ("yürü", "tense=aor,adv=ken", "yürürken"),
    ];
    for (lemma, spec, want) in direct {
        let forms = g.generate(lemma, spec).map_err(|e| e.to_string())?;
        check(forms == [want], format!("{lemma} {spec}: {forms:?}"))?;
    }
    Ok(format!("{} forms round-trip exactly", GOLD.len()))
}

fn ambiguity(g: &Grammar) -> Outcome {
    let found = g.analyze("kalemleri").map_err(|e| e.to_string())?;
    check(found.len() == 3, format!("{} analyses", found.len()))?;
    for (i, a) in found.iter().enumerate() {
        for b in &found[i + 1..] {
            check(!a.sign.is_isomorphic(&b.sign), "two analyses share a sign")?;
        }
    }
    let head = |e: &LexicalEntry, f: &str| e.sign.type_at(&format!("SYNSEM|LOCAL|CAT|HEAD|{f}")).map(str::to_string);
    let mut readings: Vec<(Option<String>, Option<String>, Option<String>)> =
        found.iter().map(|e| (head(e, "NUM"), head(e, "POSS"), head(e, "CASE"))).collect();
    readings.sort();
    let s = |x: &str| Some(x.to_string());
    let want = vec![
        // their pencil(s)
        (s("number"), s("p3pl"), s("nominative")),
        // the pencils (object)
        (s("pl"), s("none"), s("accusative")),
        // his/her pencils
        (s("pl"), s("p3sg"), s("nominative")),
    ];
    check(readings == want, format!("{readings:?}"))?;
    Ok("3 distinct analyses: PLU+ACC, PLU+POSS.3SG, POSS.3PL".into())
}

fn locative_adjunct(g: &Grammar) -> Outcome {
    let found = g.analyze("arabada").map_err(|e| e.to_string())?;
    check(found.len() == 1, format!("{} analyses", found.len()))?;
    let e = &found[0];
    let head = "SYNSEM|LOCAL|CAT|HEAD";
    check(e.sign.type_at(&format!("{head}|CASE")) == Some("locative"), "CASE is not locative")?;
    check(e.sign.type_at(&format!("{head}|MOD")) == Some("modifier"), "MOD is not a modifier")?;
    let lat = g.lattice();
    let verb = lat.type_id("verb").unwrap();
    let modsyn = e
        .sign
        .type_at(&format!("{head}|MOD|MODSYN|LOCAL|CAT|HEAD"))
        .and_then(|t| lat.type_id(t))
        .ok_or("no MODSYN head")?;
    check(lat.is_subtype(modsyn, verb), "MODSYN head is not verbal")?;
    check(e.sign.type_at("SYNSEM|LOCAL|CONT|INDEX") == Some("ref"), "noun INDEX is not referential")?;
    let at = e.lf.find("at").ok_or("no at predication")?;
    check(at.quants.is_empty(), "QUANTS not empty")?;
    let where_ = at.get("WHERE").and_then(|t| t.as_var()).ok_or("no WHERE")?;
    check(where_ == e.lf.index, format!("WHERE {where_} is not the noun index {}", e.lf.index))?;
    let what = at.get("WHAT").and_then(|t| t.as_var()).ok_or("no WHAT")?;
    check(what != e.lf.index, "WHAT is the noun itself")?;
    let inst = e.lf.find("car").and_then(|p| p.get("INST")).and_then(|t| t.as_var());
    check(inst == Some(e.lf.index.as_str()), "car is not predicated of the noun index")?;
    Ok("CASE locative, verbal MODSYN, at(WHAT, WHERE = noun index), no quantifiers".into())
}

fn verb_entries(entries: &[LexicalEntry]) -> Vec<&LexicalEntry> {
    entries.iter().filter(|e| e.type_name() == "verb-l").collect()
}

fn adjunct_opacity(all: &[LexicalEntry]) -> Outcome {
    let adjuncts: Vec<FeatureStructure> = all
        .iter()
        .filter(|e| matches!(e.case(), Some("locative" | "ablative")))
        .map(|e| e.sign.get("SYNSEM").unwrap())
        .collect();
    let mut slots: Vec<FeatureStructure> = Vec::new();
    let mut seen = HashSet::new();
    for e in verb_entries(all) {
        for el in SubcatFrame::of(&e.sign).ok_or("verb without frame")?.elements {
            if seen.insert(el.clone()) {
                slots.push(el);
            }
        }
    }
    let unified: usize = adjuncts
        .par_iter()
        .map(|a| slots.iter().filter(|s| unify(a, s).is_some()).count())
        .sum();
    check(unified == 0, format!("{unified} adjunct/slot pairs unify"))?;
    check(!adjuncts.is_empty() && !slots.is_empty(), "nothing to test")?;
    Ok(format!(
        "{} locative/ablative entries x {} distinct subcat slots: 0 unify",
        adjuncts.len(),
        slots.len()
    ))
}

fn causative_frames(g: &Grammar) -> Outcome {
    let mut n = 0;
    for r in g.roots().iter().filter(|r| r.ty == "verb-l") {
        let base = g.base_entry(&r.lemma).unwrap();
        let before = SubcatFrame::of(&base.sign).ok_or("no frame")?;
        let out = g.apply_rule("caus", base).map_err(|e| e.to_string())?;
        check(out.len() == 1, format!("{}: {} causatives", r.lemma, out.len()))?;
        let after = SubcatFrame::of(&out[0].sign).ok_or("no frame")?;
        check(after.len() == before.len() + 1, format!("{}: arity {} -> {}", r.lemma, before.len(), after.len()))?;
        let transitive = before.position("accusative").is_some();
        let demoted = if transitive { "dative" } else { "accusative" };
        let count = |f: &SubcatFrame, case: &str| (0..f.len()).filter(|&i| f.case(i) == Some(case)).count();
        let old_subject = count(&after, demoted) == count(&before, demoted) + 1
            && count(&after, "nominative") == count(&before, "nominative");
        check(old_subject, format!("{}: old subject not demoted", r.lemma))?;
        check(after.case(0) == Some("nominative") && after.role(0) == Some("subj"), format!("{}: no new subject", r.lemma))?;
        check(out[0].lf == base.lf.cause(&causer_var(1)), format!("{}: LF {}", r.lemma, out[0].lf))?;
        n += 1;
    }
    Ok(format!("{n} verbs: arity +1, demotion by transitivity, LF cause(c1, input)"))
}

fn nonreferential(g: &Grammar) -> Outcome {
    let mut n = 0;
    for r in g.roots().iter().filter(|r| r.ty == "verb-l") {
        let base = g.base_entry(&r.lemma).unwrap();
        let before = SubcatFrame::of(&base.sign).ok_or("no frame")?;
        let Some(obj_at) = before.position("accusative") else {
            continue;
        };
        let out = g.apply_rule("nonref", base).map_err(|e| e.to_string())?;
        check(out.len() == 1, format!("{}: {} outputs", r.lemma, out.len()))?;
        let after = SubcatFrame::of(&out[0].sign).ok_or("no frame")?;
        check(after.position("accusative").is_none(), format!("{}: accusative object kept", r.lemma))?;
        check(after.len() == before.len(), format!("{}: arity changed", r.lemma))?;
        let i = (0..after.len())
            .find(|&i| after.elements[i].type_at("LOCAL|CAT|ADJUNCTS|NON-REF") == Some("+"))
            .ok_or(format!("{}: no NON-REF object", r.lemma))?;
        check(after.case(i) == Some("nominative"), "non-ref object not nominative")?;
        check(after.is_preverbal(i), "non-ref object not preverbal")?;
        let old = before.elements[obj_at].get("LOCAL|CONT").unwrap();
        let new = after.elements[i].get("LOCAL|CONT").ok_or("no CONT")?;
        check(old.is_isomorphic(&new), format!("{}: CONT differs", r.lemma))?;
        n += 1;
    }
    check(n > 0, "no transitive verbs")?;
    Ok(format!("{n}/{n} transitive verbs"))
}

fn intensifier(g: &Grammar) -> Outcome {
    let cok = g.base_entry("çok").ok_or("no çok")?;
    let wanted = cok
        .sign
        .get("SYNSEM|LOCAL|CAT|HEAD|MOD|MODSYN")
        .ok_or("intensifier has no MODSYN")?;
    let synsem = |lemma: &str| g.base_entry(lemma).and_then(|e| e.sign.get("SYNSEM"));
    let rahat = synsem("rahat").ok_or("no rahat")?;
    let cift = synsem("çift").ok_or("no çift")?;
    check(unify(&wanted, &rahat).is_some(), "fails with rahat")?;
    check(unify(&wanted, &cift).is_none(), "succeeds with çift")?;
    Ok("unifies with rahat (qualitative), fails with çift (quantitative)".into())
}

fn unification_algebra() -> Outcome {
    let lat = test_lattice();
    let mut rng = ChaCha8Rng::seed_from_u64(1995);
    let pairs = 1000;
    let iso = |a: &Option<FeatureStructure>, b: &Option<FeatureStructure>| match (a, b) {
        (Some(x), Some(y)) => x.is_isomorphic(y),
        (None, None) => true,
        _ => false,
    };
    for i in 0..pairs {
        let a = random_fs(&lat, &mut rng);
        let b = random_fs(&lat, &mut rng);
        let c = random_fs(&lat, &mut rng);
        let ab = unify(&a, &b);
        check(unify(&a, &a).is_some_and(|x| x.is_isomorphic(&a)), format!("pair {i}: idempotence"))?;
        check(iso(&ab, &unify(&b, &a)), format!("pair {i}: commutativity"))?;
        let left = ab.as_ref().and_then(|x| unify(x, &c));
        let right = unify(&b, &c).and_then(|x| unify(&a, &x));
        check(iso(&left, &right), format!("pair {i}: associativity"))?;
        if let Some(u) = &ab {
            check(a.subsumes(u) && b.subsumes(u), format!("pair {i}: monotonicity"))?;
        }
        let oracle = oracle_unify(&lat, &PathFs::of(&a), &PathFs::of(&b));
        check(ab.as_ref().map(PathFs::of) == oracle, format!("pair {i}: oracle disagrees"))?;
    }
    let mut glbs = 0;
    for l in [lat.clone(), Grammar::bundled().lattice().clone()] {
        for x in l.types() {
            for y in l.types() {
                check(l.glb(x, y) == brute_glb(&l, x, y), format!("glb {} {}", l.type_name(x), l.type_name(y)))?;
                glbs += 1;
            }
        }
    }
    Ok(format!("{pairs} random pairs, {glbs} glb pairs against brute force"))
}

fn keys(entries: &[LexicalEntry]) -> HashSet<EntryKey> {
    entries.iter().map(LexicalEntry::key).collect()
}

fn mode_equivalence(g: &Arc<Grammar>) -> Outcome {
    let compiled = Engine::new(g.clone(), Mode::Compiled).map_err(|e| e.to_string())?;
    let runtime = Engine::new(g.clone(), Mode::Runtime).map_err(|e| e.to_string())?;
    let lex = compiled.compiled().unwrap();
    let surfaces: Vec<&str> = lex.keys().collect();
    let bad: Vec<&str> = surfaces
        .par_iter()
        .filter(|s| match runtime.analyze(s) {
            Ok(found) => keys(&found) != keys(lex.lookup(s)),
            Err(_) => true,
        })
        .copied()
        .collect();
    check(bad.is_empty(), format!("{} mismatches, e.g. {:?}", bad.len(), &bad[..bad.len().min(5)]))?;
    Ok(format!("{} surface keys, 0 mismatches", surfaces.len()))
}

fn main() {
    let g = Arc::new(Grammar::bundled());
    let all: Vec<LexicalEntry> = g.compile().expect("bundled grammar compiles").entries().cloned().collect();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("paradigm combinatorics", Box::new(paradigm_combinatorics)),
        ("lexicon blow-up", Box::new(|| lexicon_blow_up(&g))),
        ("gold surface forms", Box::new(|| gold_forms(&g))),
        ("ambiguity count", Box::new(|| ambiguity(&g))),
        ("locative adjunct semantics", Box::new(|| locative_adjunct(&g))),
        ("adjunct opacity", Box::new(|| adjunct_opacity(&all))),
        ("causative frames", Box::new(|| causative_frames(&g))),
        ("non-referential objects", Box::new(|| nonreferential(&g))),
        ("intensifier constraint", Box::new(|| intensifier(&g))),
        ("unification algebra", Box::new(unification_algebra)),
        ("mode equivalence", Box::new(|| mode_equivalence(&g))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{t:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{t:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
