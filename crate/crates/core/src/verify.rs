//! Verification harness: Whittaker dimensions under parabolic induction,
//! multiplicity one, and non-genericity of a restricted representation of the
//! paramodular Levi.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classfun::{hc_induce, is_cuspidal, outer_tensor, restrict, to_integer, ClassFnError, ClassFunction};
use crate::field::{FieldError, FieldTable};
use crate::genericity::{generic_characters, genericity_reports, whittaker_dim, GenericityError, UnipotentCharacter};
use crate::groups::cache::GroupCache;
use crate::groups::{build_group, GroupError, GroupFamily, Reductive};
use crate::tables::{dixon_table, levi_table, steinberg, IrreducibleTable, TableError};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Class(#[from] ClassFnError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Genericity(#[from] GenericityError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{0} is not irreducible")]
    NotIrreducible(String),
    #[error("{0} is not cuspidal")]
    NotCuspidal(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("structure: {0}")]
    Structure(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Eq,
    Ge,
}

/// One asserted comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub psi: String,
    pub input: String,
    pub lhs: i64,
    pub rhs: i64,
    pub relation: Relation,
}

impl Cell {
    pub fn eq(psi: impl Into<String>, input: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        Cell { psi: psi.into(), input: input.into(), lhs, rhs, relation: Relation::Eq }
    }

    pub fn holds(&self) -> bool {
        match self.relation {
            Relation::Eq => self.lhs == self.rhs,
            Relation::Ge => self.lhs >= self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub statement: String,
    pub params: BTreeMap<String, String>,
    pub cells: Vec<Cell>,
    pub pass: bool,
    /// Wall time, only filled in when timing is requested.
    pub ms: Option<u64>,
}

impl VerificationReport {
    pub fn new(statement: &str, params: BTreeMap<String, String>, cells: Vec<Cell>) -> Self {
        let pass = !cells.is_empty() && cells.iter().all(Cell::holds);
        VerificationReport { statement: statement.into(), params, cells, pass, ms: None }
    }

    pub fn failing_cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| !c.holds())
    }
}

fn params(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Groups, fields and Dixon tables built once per `(family, q)`.
#[derive(Debug, Default)]
pub struct GroupStore {
    cache: Option<GroupCache>,
    fields: Mutex<HashMap<u32, Arc<FieldTable>>>,
    groups: Mutex<HashMap<(GroupFamily, u32), Reductive>>,
    tables: Mutex<HashMap<(GroupFamily, u32), Arc<IrreducibleTable<f64>>>>,
}

impl GroupStore {
    pub fn new(cache: Option<GroupCache>) -> Self {
        GroupStore { cache, ..Default::default() }
    }

    pub fn field(&self, q: u32) -> Result<Arc<FieldTable>, VerifyError> {
        let mut fields = self.fields.lock().expect("field store poisoned");
        if let Some(f) = fields.get(&q) {
            return Ok(f.clone());
        }
        let f = Arc::new(FieldTable::from_order(q)?);
        fields.insert(q, f.clone());
        Ok(f)
    }

    pub fn group(&self, family: GroupFamily, q: u32) -> Result<Reductive, VerifyError> {
        if let Some(r) = self.groups.lock().expect("group store poisoned").get(&(family, q)) {
            return Ok(r.clone());
        }
        let field = self.field(q)?;
        let r = match &self.cache {
            Some(c) => c.load_or_build(family, field)?,
            None => Reductive::new(Arc::new(build_group(family, field)?))?,
        };
        self.groups.lock().expect("group store poisoned").insert((family, q), r.clone());
        Ok(r)
    }

    pub fn dixon(&self, family: GroupFamily, q: u32) -> Result<Arc<IrreducibleTable<f64>>, VerifyError> {
        if let Some(t) = self.tables.lock().expect("table store poisoned").get(&(family, q)) {
            return Ok(t.clone());
        }
        let r = self.group(family, q)?;
        let t = Arc::new(dixon_table(&r.group)?);
        self.tables.lock().expect("table store poisoned").insert((family, q), t.clone());
        Ok(t)
    }
}

/// Parabolic indices selected by a Levi tag; `None` or `all` means every proper one.
/// `torus` is accepted for the Borel.
pub fn select_parabolics(red: &Reductive, levi: Option<&str>) -> Result<Vec<usize>, VerifyError> {
    match levi {
        None | Some("all") => Ok(red.proper_parabolics().map(|(i, _)| i).collect()),
        Some("torus") => Ok(vec![red.borel_index()]),
        Some(tag) => red
            .parabolic(tag)
            .map(|(i, _)| vec![i])
            .ok_or_else(|| VerifyError::Unsupported(format!("no parabolic {tag} in {}", red.group.label()))),
    }
}

/// `dim Hom_Q(σ, ψ_M)` with `Q = M ∩ w₀Uw₀⁻¹` and `ψ_M(x) = ψ(w₀⁻¹xw₀)`.
pub fn levi_whittaker_dim(
    red: &Reductive,
    par_idx: usize,
    sigma: &ClassFunction<f64>,
    psi: &UnipotentCharacter,
) -> Result<i64, VerifyError> {
    let par = &red.data.parabolics[par_idx];
    let g = &red.group;
    let w = red.data.long_element;
    let wi = g.inverse(w);
    let mut s = num_complex::Complex::new(0.0, 0.0);
    for &x in &par.opposite_unipotent {
        let parent = par.levi_embedding[x as usize];
        let y = g.mul(g.mul(wi, parent), w);
        if red.data.unipotent.binary_search(&y).is_err() {
            return Err(VerifyError::Structure(format!("w0^-1 Q w0 is not inside U for {}", par.tag)));
        }
        s += sigma.at(x) * psi.eval::<f64>(g.element(y)).conj();
    }
    let d = to_integer(s / par.opposite_unipotent.len() as f64, "Hom_Q(sigma, psi_M)")?;
    if d < 0 {
        return Err(VerifyError::Structure(format!("negative Hom_Q dimension {d}")));
    }
    Ok(d)
}

/// Whittaker dimension of the parabolically induced character against each
/// generic `ψ`, compared with `dim Hom_Q(σ, ψ_M)`.
pub fn rodier_check(
    red: &Reductive,
    par_idx: usize,
    sigma: &ClassFunction<f64>,
    label: &str,
) -> Result<Vec<Cell>, VerifyError> {
    if !sigma.is_irreducible_character() {
        return Err(VerifyError::NotIrreducible(label.into()));
    }
    let induced = hc_induce(red, par_idx, sigma)?;
    let mut cells = Vec::new();
    for psi in generic_characters(red)? {
        let lhs = whittaker_dim(&induced, &psi)?;
        let rhs = levi_whittaker_dim(red, par_idx, sigma, &psi)?;
        cells.push(Cell::eq(psi.to_string(), label, lhs, rhs));
    }
    Ok(cells)
}

/// Rodier comparison for every irreducible character of the selected Levis.
pub fn rodier_suite(
    store: &GroupStore,
    family: GroupFamily,
    q: u32,
    levi: Option<&str>,
) -> Result<VerificationReport, VerifyError> {
    let red = store.group(family, q)?;
    let mut cells = Vec::new();
    let selected = select_parabolics(&red, levi)?;
    for &i in &selected {
        let tag = &red.data.parabolics[i].tag;
        let table = levi_table::<f64>(&red, i)?;
        for (label, sigma) in table.iter() {
            cells.extend(rodier_check(&red, i, sigma, &format!("{tag}:{label}"))?);
        }
    }
    Ok(VerificationReport::new(
        "rodier",
        params(&[("family", family.tag().into()), ("q", q.to_string()), ("levi", levi.unwrap_or("all").into())]),
        cells,
    ))
}

/// For cuspidal `σ`: the induced character's Whittaker dimension equals that of
/// `σ` against `ψ_M`, and its constituents in the full table carry exactly that
/// many generic constituents (at most one) per generic `ψ`.
pub fn genericity_transfer_check(
    red: &Reductive,
    par_idx: usize,
    sigma: &ClassFunction<f64>,
    label: &str,
    table: &IrreducibleTable<f64>,
) -> Result<Vec<Cell>, VerifyError> {
    let levi = red.levi(par_idx)?;
    if !sigma.is_irreducible_character() {
        return Err(VerifyError::NotIrreducible(label.into()));
    }
    if !is_cuspidal(&levi, sigma)? {
        return Err(VerifyError::NotCuspidal(label.into()));
    }
    let induced = hc_induce(red, par_idx, sigma)?;
    let mults = table.decompose(&induced)?;
    let mut cells = Vec::new();
    for psi in generic_characters(red)? {
        let lhs = whittaker_dim(&induced, &psi)?;
        let rhs = levi_whittaker_dim(red, par_idx, sigma, &psi)?;
        cells.push(Cell::eq(psi.to_string(), format!("{label}: induced vs Levi"), lhs, rhs));
        let mut generic_constituents = 0;
        for (m, row) in mults.iter().zip(table.rows()) {
            if *m == 0 {
                continue;
            }
            let d = whittaker_dim(row, &psi)?;
            cells.push(Cell { relation: Relation::Ge, ..Cell::eq(psi.to_string(), format!("{label}: constituent Whittaker dim <= 1"), 1, d) });
            generic_constituents += m * d;
        }
        cells.push(Cell::eq(
            psi.to_string(),
            format!("{label}: generic constituents"),
            generic_constituents,
            i64::from(lhs > 0),
        ));
    }
    Ok(cells)
}

/// Transfer check for every cuspidal character of the selected Levis.
pub fn transfer_suite(
    store: &GroupStore,
    family: GroupFamily,
    q: u32,
    levi: Option<&str>,
) -> Result<VerificationReport, VerifyError> {
    let red = store.group(family, q)?;
    let table = store.dixon(family, q)?;
    let mut cells = Vec::new();
    for i in select_parabolics(&red, levi)? {
        let tag = &red.data.parabolics[i].tag;
        let levi_red = red.levi(i)?;
        let lt = levi_table::<f64>(&red, i)?;
        for (label, sigma) in lt.iter() {
            if is_cuspidal(&levi_red, sigma)? {
                cells.extend(genericity_transfer_check(&red, i, sigma, &format!("{tag}:{label}"), &table)?);
            }
        }
    }
    Ok(VerificationReport::new(
        "transfer",
        params(&[("family", family.tag().into()), ("q", q.to_string()), ("levi", levi.unwrap_or("all").into())]),
        cells,
    ))
}

/// Every principal series `Ind_B^G χ` has Whittaker dimension one for every generic `ψ`.
pub fn multiplicity_one_suite(store: &GroupStore, family: GroupFamily, q: u32) -> Result<VerificationReport, VerifyError> {
    if !matches!(family, GroupFamily::Gl2 | GroupFamily::Gsp4) {
        return Err(VerifyError::Unsupported(format!("multiplicity one is checked for gl2 and gsp4, not {family}")));
    }
    let red = store.group(family, q)?;
    let b = red.borel_index();
    let chars = levi_table::<f64>(&red, b)?;
    let generic = generic_characters(&red)?;
    let mut cells = Vec::new();
    for (label, chi) in chars.iter() {
        let induced = hc_induce(&red, b, chi)?;
        for psi in &generic {
            cells.push(Cell::eq(psi.to_string(), label, whittaker_dim(&induced, psi)?, 1));
        }
    }
    Ok(VerificationReport::new("mult-one", params(&[("family", family.tag().into()), ("q", q.to_string())]), cells))
}

/// `1⊗St ⊕ St⊗1` restricted from GL(2)×GL(2) to the paramodular Levi is a
/// nonzero character of degree `2q` with Whittaker dimension zero for every
/// generic `ψ`; `St⊗St` serves as a control that does have a Whittaker model.
pub fn counterexample_check(store: &GroupStore, q: u32) -> Result<VerificationReport, VerifyError> {
    let gl2 = store.group(GroupFamily::Gl2, q)?;
    let product = store.group(GroupFamily::Gl2Squared, q)?;
    let levi = store.group(GroupFamily::ParamodularLevi, q)?;
    let st = steinberg::<f64>(&gl2)?;
    let one = ClassFunction::trivial(gl2.group.clone());
    let outer = outer_tensor(&product.group, &one, &st)?.add(&outer_tensor(&product.group, &st, &one)?)?;
    let rho = restrict(&outer, &levi.group)?;
    let control = restrict(&outer_tensor(&product.group, &st, &st)?, &levi.group)?;

    let mut cells = vec![Cell::eq("-", "degree(1xSt+Stx1)", to_integer(rho.degree(), "degree")?, 2 * q as i64)];
    cells.push(Cell { relation: Relation::Ge, ..Cell::eq("-", "norm(1xSt+Stx1)", rho.multiplicity(&rho)?, 1) });
    let generic = generic_characters(&levi)?;
    let mut control_max = 0;
    for psi in &generic {
        cells.push(Cell::eq(psi.to_string(), "1xSt+Stx1", whittaker_dim(&rho, psi)?, 0));
        control_max = control_max.max(whittaker_dim(&control, psi)?);
    }
    cells.push(Cell { relation: Relation::Ge, ..Cell::eq("max over generic", "control StxSt", control_max, 1) });
    Ok(VerificationReport::new(
        "counterexample",
        params(&[("family", GroupFamily::ParamodularLevi.tag().into()), ("q", q.to_string()), ("generic_psi", generic.len().to_string())]),
        cells,
    ))
}

/// The stabilizer, adjoint-torus and coordinate criteria for every character of `U`.
pub fn definition_equivalence_check(store: &GroupStore, family: GroupFamily, q: u32) -> Result<VerificationReport, VerifyError> {
    let red = store.group(family, q)?;
    let mut cells = Vec::new();
    for r in genericity_reports(&red)? {
        let generic = i64::from(r.generic);
        cells.push(Cell::eq(r.psi.clone(), "stabilizer=center vs trivial adjoint stabilizer", generic, i64::from(r.adjoint_stabilizer_size == 1)));
        cells.push(Cell::eq(r.psi, "stabilizer=center vs nonzero coordinates", generic, i64::from(r.coordinates_nonzero)));
    }
    Ok(VerificationReport::new("definitions", params(&[("family", family.tag().into()), ("q", q.to_string())]), cells))
}

/// Order formula, class partition and `B ∩ w₀Bw₀⁻¹ = T`.
pub fn structure_check(store: &GroupStore, family: GroupFamily, q: u32) -> Result<VerificationReport, VerifyError> {
    let red = store.group(family, q)?;
    let g = &red.group;
    let d = &red.data;
    let sizes: usize = g.classes().iter().map(|c| c.size()).sum();
    let w = d.long_element;
    let mut meet: Vec<u32> = d
        .borel
        .iter()
        .map(|&b| g.conjugate(w, b))
        .filter(|x| d.borel.binary_search(x).is_ok())
        .collect();
    meet.sort_unstable();
    let cells = vec![
        Cell::eq("-", "order vs formula", g.order() as i64, family.expected_order(q as u64) as i64),
        Cell::eq("-", "sum of class sizes", sizes as i64, g.order() as i64),
        Cell::eq("-", "B meet w0 B w0^-1 equals T", i64::from(meet == d.torus), 1),
    ];
    Ok(VerificationReport::new("structure", params(&[("family", family.tag().into()), ("q", q.to_string())]), cells))
}

/// Everything, in a fixed order.
pub fn standard_suite(store: &GroupStore) -> Result<Vec<VerificationReport>, VerifyError> {
    let mut out = Vec::new();
    for q in [2, 3] {
        out.push(counterexample_check(store, q)?);
    }
    for family in [GroupFamily::Gl2, GroupFamily::Gsp4] {
        for q in [2, 3] {
            out.push(rodier_suite(store, family, q, None)?);
        }
    }
    for family in [GroupFamily::Gl2, GroupFamily::Gsp4] {
        for q in [2, 3] {
            out.push(multiplicity_one_suite(store, family, q)?);
        }
    }
    out.push(transfer_suite(store, GroupFamily::Gsp4, 2, None)?);
    for family in crate::groups::ALL_FAMILIES {
        for q in [2, 3] {
            out.push(definition_equivalence_check(store, family, q)?);
        }
    }
    for family in [GroupFamily::Gl2, GroupFamily::Gsp4] {
        for q in [2, 3] {
            out.push(structure_check(store, family, q)?);
        }
    }
    Ok(out)
}
