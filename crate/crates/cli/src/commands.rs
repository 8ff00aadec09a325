//! Subcommand bodies. Each returns the JSON document and a plain-text rendering.

use std::fmt::Write as _;
use std::sync::Arc;

use monohecke::canonical::{CanonicalTable, BLOCK_GUARD};
use monohecke::centre::{centre_reports, CentreReport};
use monohecke::group_algebra::{check_isomorphism, check_level_compatibility};
use monohecke::{
    Block, CharId, CharSpace, FactorBounds, HeckeAlgebra, HeckeElt, Level, PropertyCheck, PsiReading, RootDatum,
    Twist, TwistCase, WeylGroup,
};
use clap::ValueEnum;
use serde_json::{json, Value};

use crate::cache::{Cache, CacheKey};
use crate::CliError;

pub type Output = (Value, String);

/// Everything that fixes the algebra H_n.
pub struct Setup {
    pub datum: RootDatum,
    pub n: u32,
    pub guard: Option<usize>,
    pub cache: Option<Cache>,
}

pub struct TwistSpec {
    pub q: u32,
    pub pi: Option<Vec<usize>>,
    pub case: TwistCase,
    pub s: i64,
}

impl Setup {
    fn weyl(&self) -> Result<Arc<WeylGroup>, CliError> {
        Ok(WeylGroup::new(self.datum.clone())?)
    }

    fn algebra(&self) -> Result<HeckeAlgebra, CliError> {
        let weyl = self.weyl()?;
        let space = match self.guard {
            Some(g) => CharSpace::with_guard(weyl, self.n, g)?,
            None => CharSpace::new(weyl, self.n)?,
        };
        Ok(HeckeAlgebra::new(space))
    }

    fn block_guard(&self) -> usize {
        self.guard.unwrap_or(BLOCK_GUARD)
    }

    /// All blocks, with structure constants read from or written to the cache.
    fn level(&self, alg: &HeckeAlgebra) -> Result<Level, CliError> {
        let guard = self.block_guard();
        let fingerprint = self.datum.fingerprint();
        let level = Level::with_tables(alg, |canon| {
            let Some(cache) = &self.cache else {
                return canon.h_table(guard);
            };
            let key = CacheKey::new(&fingerprint, self.n, "h", &block_key(alg, canon));
            if let Some(table) = cache
                .get(&key)
                .and_then(|v| monohecke::HTable::from_json(&v).ok())
                .filter(|t| t.size() == canon.len())
            {
                return Ok(table);
            }
            let table = canon.h_table(guard)?;
            if let Err(e) = cache.put(&key, &table.to_json()) {
                eprintln!("warning: cannot write cache in {}: {e}", cache.dir().display());
            }
            Ok(table)
        })?;
        Ok(level)
    }

    fn char_of(&self, alg: &HeckeAlgebra, lambda: &Option<Vec<i64>>) -> Result<CharId, CliError> {
        match lambda {
            None => Ok(alg.space().zero()),
            Some(coords) if coords.len() != self.datum.rank() => Err(CliError::Usage(format!(
                "--lambda needs {} coordinates, got {}",
                self.datum.rank(),
                coords.len()
            ))),
            Some(coords) => Ok(alg.space().id_of_coords(coords)?),
        }
    }

    fn twist(&self, alg: &HeckeAlgebra, spec: &TwistSpec) -> Result<Twist, CliError> {
        let pi = spec.pi.clone().unwrap_or_else(|| (0..self.datum.semisimple_rank()).collect());
        Ok(Twist::new(alg.space(), pi, spec.q, spec.case)?)
    }
}

fn block_key(alg: &HeckeAlgebra, canon: &CanonicalTable) -> Value {
    Value::Array(canon.block().orbit.iter().map(|&l| json!(alg.space().char_json(l))).collect())
}

fn elt_string(alg: &HeckeAlgebra, h: &HeckeElt) -> String {
    let terms: Vec<String> = h.terms().map(|(i, f)| format!("({f}) T[{}]", alg.idx_string(i))).collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn datum_json(datum: &RootDatum) -> Value {
    json!({
        "name": datum.name(),
        "rank": datum.rank(),
        "simple_roots": datum.simple_roots(),
        "simple_coroots": datum.simple_coroots(),
        "cartan": datum.cartan(),
    })
}

pub fn weyl_list(setup: &Setup) -> Result<Output, CliError> {
    let weyl = setup.weyl()?;
    let elements: Vec<Value> = weyl
        .all_elements()
        .into_iter()
        .map(|w| json!({ "word": weyl.word_string(w), "length": weyl.length(w) }))
        .collect();
    let roots: Vec<&Vec<i64>> = weyl.datum().positive_roots().iter().map(|r| &r.vector).collect();
    let mut text = format!("|W| = {}, |R+| = {}\n", weyl.order(), roots.len());
    for w in weyl.all_elements() {
        writeln!(text, "{:>8}  {}", weyl.word_string(w), weyl.length(w)).unwrap();
    }
    let doc = json!({
        "datum": datum_json(&setup.datum),
        "order": weyl.order(),
        "positive_roots": roots,
        "elements": elements,
    });
    Ok((doc, text))
}

pub fn block(setup: &Setup, lambda: &Option<Vec<i64>>) -> Result<Output, CliError> {
    let alg = setup.algebra()?;
    let space = alg.space();
    let l = setup.char_of(&alg, lambda)?;
    let block = Block::new(space, l);
    let roots = setup.datum.roots();
    let mut stabilizers = Vec::new();
    let mut text = format!("orbit of {}: {} characters, {} indices\n", space.get(l), block.orbit.len(), block.len());
    for &m in &block.orbit {
        let data = space.lambda_data(m)?;
        let vectors = |ix: &[usize]| ix.iter().map(|&r| roots[r].vector.clone()).collect::<Vec<_>>();
        writeln!(text, "  {}: |R_λ+| = {}, |W_λ| = {}", space.get(m), data.positive_roots.len(), data.subgroup.order())
            .unwrap();
        stabilizers.push(json!({
            "lambda": space.char_json(m),
            "positive_roots": vectors(&data.positive_roots),
            "simple_roots": vectors(&data.simple_roots),
            "order": data.subgroup.order(),
        }));
    }
    let doc = json!({
        "n": setup.n,
        "lambda": space.char_json(l),
        "orbit": block.orbit.iter().map(|&m| space.char_json(m)).collect::<Vec<_>>(),
        "indices": block.indices.iter().map(|&i| alg.idx_json(i)).collect::<Vec<_>>(),
        "stabilizers": stabilizers,
    });
    Ok((doc, text))
}

pub fn canonical(setup: &Setup, lambda: &Option<Vec<i64>>) -> Result<Output, CliError> {
    let alg = setup.algebra()?;
    let l = setup.char_of(&alg, lambda)?;
    let canon = CanonicalTable::new(&alg, Block::new(alg.space(), l))?;
    let mut text = String::new();
    for p in 0..canon.len() {
        writeln!(text, "c[{}] = {}", alg.idx_string(canon.idx(p)), elt_string(&alg, canon.c_at(p))).unwrap();
    }
    let doc = json!({
        "n": setup.n,
        "orbit": canon.block().orbit.iter().map(|&m| alg.space().char_json(m)).collect::<Vec<_>>(),
        "basis": canon.to_json(),
        "kl": canon.kl_json(),
    });
    Ok((doc, text))
}

pub fn cells(setup: &Setup) -> Result<Output, CliError> {
    let alg = setup.algebra()?;
    let level = setup.level(&alg)?;
    let mut doc = level.cells_json();
    doc["n"] = json!(setup.n);
    let mut text = String::new();
    for (k, cell) in doc["cells"].as_array().into_iter().flatten().enumerate() {
        let members: Vec<String> = cell["members"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|m| format!("{}·{}", m["w"].as_str().unwrap_or(""), m["lambda"]))
            .collect();
        writeln!(text, "cell {k} (a = {}): {}", cell["a"], members.join(" ")).unwrap();
    }
    Ok((doc, text))
}

pub fn jring(setup: &Setup, lambda: &Option<Vec<i64>>) -> Result<Output, CliError> {
    let alg = setup.algebra()?;
    let l = setup.char_of(&alg, lambda)?;
    let canon = CanonicalTable::new(&alg, Block::new(alg.space(), l))?;
    let h = canon.h_table(setup.block_guard())?;
    let data = monohecke::CellData::new(&canon, h)?;
    let mut products = Vec::new();
    let mut text = String::new();
    for p in 0..data.len() {
        for q in 0..data.len() {
            let prod = data.j_chain(&[p, q]);
            if prod.is_zero() {
                continue;
            }
            let terms: Vec<Value> = prod.terms().map(|(j, c)| json!({ "idx": alg.idx_json(j), "coeff": c })).collect();
            let rendered: Vec<String> = prod.terms().map(|(j, c)| format!("{c} t[{}]", alg.idx_string(j))).collect();
            writeln!(text, "t[{}] t[{}] = {}", data.name(p), data.name(q), rendered.join(" + ")).unwrap();
            products.push(json!({ "i": alg.idx_json(data.idx(p)), "ip": alg.idx_json(data.idx(q)), "terms": terms }));
        }
    }
    let doc = json!({
        "n": setup.n,
        "orbit": canon.block().orbit.iter().map(|&m| alg.space().char_json(m)).collect::<Vec<_>>(),
        "a": (0..data.len()).map(|p| json!({ "idx": alg.idx_json(data.idx(p)), "a": data.a(p) })).collect::<Vec<_>>(),
        "distinguished": data.distinguished().into_iter().map(|p| alg.idx_json(data.idx(p))).collect::<Vec<_>>(),
        "products": products,
    });
    Ok((doc, text))
}

pub fn twist(setup: &Setup, spec: &TwistSpec) -> Result<Output, CliError> {
    let alg = setup.algebra()?;
    let level = setup.level(&alg)?;
    let t = setup.twist(&alg, spec)?;
    let space = alg.space();
    let eps: Vec<Value> = space
        .all_chars()
        .map(|l| json!({ "from": space.char_json(l), "to": space.char_json(t.eps_char(1, l)) }))
        .collect();
    let mut text = format!("ε has order {} on I_n\n", t.order());
    let mut stable = Vec::new();
    for c in t.stable_cells(&level, spec.s)? {
        let z = t.z_boc(&level, c)?;
        let cs = t.cell_s(&level, c, spec.s)?;
        let names: Vec<String> = cs.iter().map(|&i| alg.idx_string(i)).collect();
        writeln!(text, "stable cell {}.{} (period {z}): c^s = {}", c.block, c.cell, names.join(" ")).unwrap();
        stable.push(json!({
            "members": level.cell_json(c),
            "z": z,
            "cell_s": cs.iter().map(|&i| alg.idx_json(i)).collect::<Vec<_>>(),
        }));
    }
    let doc = json!({
        "n": setup.n,
        "twist": t.to_json(),
        "order": t.order(),
        "s": spec.s,
        "eps": eps,
        "i_s": t.i_s(spec.s).into_iter().map(|i| alg.idx_json(i)).collect::<Vec<_>>(),
        "stable_cells": stable,
    });
    Ok((doc, text))
}

fn report_line(alg: &HeckeAlgebra, r: &CentreReport) -> String {
    let cols: Vec<String> = r
        .decompositions()
        .into_iter()
        .map(|col| {
            col.into_iter()
                .map(|(i, m)| if m == 1 { alg.idx_string(i) } else { format!("{m}·{}", alg.idx_string(i)) })
                .collect::<Vec<_>>()
                .join(" + ")
        })
        .collect();
    let case = r.sl2_case.map(|c| format!(" case ({c})")).unwrap_or_default();
    let amb = if r.ambiguous() { " [ambiguous]" } else { "" };
    format!("cell of size {}{case}: {} simples{amb}\n    {}", r.cell.len(), r.simples(), cols.join("\n    "))
}

pub fn centre(setup: &Setup, spec: &TwistSpec, bounds: FactorBounds) -> Result<Output, CliError> {
    let alg = setup.algebra()?;
    let level = setup.level(&alg)?;
    let t = setup.twist(&alg, spec)?;
    let reports = centre_reports(&level, &t, spec.s, bounds)?;
    let mut text = String::new();
    for r in &reports {
        writeln!(text, "{}", report_line(&alg, r)).unwrap();
    }
    let doc = json!({
        "n": setup.n,
        "twist": t.to_json(),
        "s": spec.s,
        "simples": reports.iter().map(CentreReport::simples).collect::<Vec<_>>(),
        "reports": reports.iter().map(|r| r.to_json(&level)).collect::<Vec<_>>(),
    });
    Ok((doc, text))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    QProperties,
    Canonical,
    Twist,
    Psi,
    GroupAlgebra,
    Levels,
    Centre,
    All,
}

pub fn check(setup: &Setup, spec: &TwistSpec, suite: Suite, to: Option<u32>) -> Result<Output, CliError> {
    let alg = setup.algebra()?;
    let needs_level = !matches!(suite, Suite::GroupAlgebra | Suite::Levels);
    let level = if needs_level { Some(setup.level(&alg)?) } else { None };
    let level = level.as_ref();
    let mut checks: Vec<PropertyCheck> = Vec::new();
    let want = |s: Suite| suite == s || suite == Suite::All;
    if let Some(lv) = level {
        if want(Suite::QProperties) {
            checks.extend(lv.q_suite());
            checks.push(lv.block_closure_check()?);
        }
        if want(Suite::Canonical) {
            checks.extend(lv.canonical_checks());
        }
        if want(Suite::Psi) {
            for reading in [PsiReading::TwoSided, PsiReading::Left] {
                let mut merged: Option<PropertyCheck> = None;
                for b in lv.blocks() {
                    let c = b.cells.check_psi(reading)?;
                    match &mut merged {
                        Some(m) => m.merge(&c),
                        None => merged = Some(c),
                    }
                }
                checks.extend(merged);
            }
        }
        if want(Suite::Twist) || want(Suite::Centre) {
            let t = setup.twist(&alg, spec)?;
            if want(Suite::Twist) {
                checks.extend(t.check_fixed_points(lv, spec.s)?);
                checks.push(t.check_compatibility(lv)?);
            }
            if want(Suite::Centre) {
                for r in centre_reports(lv, &t, spec.s, FactorBounds::default())? {
                    for c in r.checks {
                        match checks.iter_mut().find(|m| m.name == c.name) {
                            Some(m) => m.merge(&c),
                            None => checks.push(c),
                        }
                    }
                }
            }
        }
    }
    if want(Suite::GroupAlgebra) {
        checks.extend(check_isomorphism(&alg)?);
    }
    if suite == Suite::Levels {
        let np = to.ok_or_else(|| CliError::Usage("--suite levels needs --to".into()))?;
        let big = Setup {
            datum: setup.datum.clone(),
            n: np,
            guard: setup.guard,
            cache: None,
        }
        .algebra()?;
        checks.extend(check_level_compatibility(&alg, &big)?);
    }
    let passed = checks.iter().all(|c| c.passed);
    let mut text = String::new();
    for c in &checks {
        writeln!(text, "{c}").unwrap();
    }
    writeln!(text, "{}", if passed { "all checks passed" } else { "some checks FAILED" }).unwrap();
    let doc = json!({
        "n": setup.n,
        "suite": suite.to_possible_value().map(|v| v.get_name().to_string()),
        "passed": passed,
        "checks": checks.iter().map(PropertyCheck::to_json).collect::<Vec<_>>(),
    });
    Ok((doc, text))
}
