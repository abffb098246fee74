//! The problem file format.
//!
//! ```text
//! # comments start with '#'
//! [group Z2]
//! kind = abelian
//! rank = 2
//!
//! [morphism cat]
//! group = Z2
//! matrix = 2 1; 1 1
//! automorphism = true
//!
//! [problem orbit]
//! kind = brp
//! group = Z2
//! morphism = cat
//! subject = (1,0)
//! element = (5,3)
//! ```
//!
//! Lists are separated by `;`. Names must be declared before they are used.

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;

use genconj::lattice::IntMatrix;
use genconj::{parse_word, Budget, Element, Group, Morphism, ProblemInstance, ProblemKind, Target, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

/// Budget keys a problem may override.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BudgetOverrides {
    pub max_exponent: Option<u64>,
    pub ball_radius: Option<usize>,
    pub max_quotient_size: Option<u64>,
    pub max_steps: Option<u64>,
    pub generic_quotient_fallback: Option<bool>,
}

impl BudgetOverrides {
    pub fn apply(&self, mut budget: Budget) -> Budget {
        if let Some(v) = self.max_exponent {
            budget.max_exponent = v;
        }
        if let Some(v) = self.ball_radius {
            budget.max_radius = v;
        }
        if let Some(v) = self.max_quotient_size {
            budget.max_quotient_size = v;
        }
        if let Some(v) = self.max_steps {
            budget.max_steps = v;
        }
        if let Some(v) = self.generic_quotient_fallback {
            budget.generic_quotients = v;
        }
        budget
    }

    fn entries(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        if let Some(v) = self.max_exponent {
            out.push(("max-exponent", v.to_string()));
        }
        if let Some(v) = self.ball_radius {
            out.push(("ball-radius", v.to_string()));
        }
        if let Some(v) = self.max_quotient_size {
            out.push(("max-quotient-size", v.to_string()));
        }
        if let Some(v) = self.max_steps {
            out.push(("max-steps", v.to_string()));
        }
        if let Some(v) = self.generic_quotient_fallback {
            out.push(("generic-quotient-fallback", v.to_string()));
        }
        out
    }
}

/// A group or morphism declaration, kept as written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Declared<T> {
    pub name: String,
    pub entries: Vec<(String, String)>,
    pub value: T,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetShape {
    Finite(Vec<Element>),
    Subgroup(Vec<Element>),
    Coset(Element, Vec<Element>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetDecl {
    pub name: String,
    pub group: String,
    pub shape: TargetShape,
    pub target: Target,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetRef {
    Named(String),
    Element(Element),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemDecl {
    pub name: String,
    pub group: String,
    pub morphism: Option<String>,
    pub target: TargetRef,
    pub budget: BudgetOverrides,
    pub instance: ProblemInstance,
}

/// Position of a declaration in its list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectionRef {
    Group(usize),
    Morphism(usize),
    Target(usize),
    Problem(usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProblemFile {
    pub groups: Vec<Declared<Group>>,
    pub morphisms: Vec<Declared<Morphism>>,
    pub targets: Vec<TargetDecl>,
    pub problems: Vec<ProblemDecl>,
    /// Declarations in file order.
    pub order: Vec<SectionRef>,
}

struct Entry {
    key: String,
    value: String,
    line: usize,
    column: usize,
}

struct Section {
    kind: String,
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

impl Section {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: 1,
            message: format!("[{} {}]: {}", self.kind, self.name, message.into()),
        }
    }

    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    fn require(&self, key: &str) -> Result<&Entry, ParseError> {
        self.get(key).ok_or_else(|| self.err(format!("missing key `{key}`")))
    }
}

impl Entry {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: format!("`{}`: {}", self.key, message.into()),
        }
    }

    fn list(&self) -> Vec<&str> {
        if self.value.trim().is_empty() {
            return Vec::new();
        }
        self.value.split(';').map(str::trim).collect()
    }

    fn number<T: std::str::FromStr>(&self) -> Result<T, ParseError> {
        self.value.parse().map_err(|_| self.err(format!("expected a number, got `{}`", self.value)))
    }

    fn flag(&self) -> Result<bool, ParseError> {
        match self.value.as_str() {
            "true" | "yes" => Ok(true),
            "false" | "no" => Ok(false),
            v => Err(self.err(format!("expected true or false, got `{v}`"))),
        }
    }

    fn element(&self, group: &Group, text: &str) -> Result<Element, ParseError> {
        group.parse_element(text).map_err(|e| self.err(e.to_string()))
    }

    fn elements(&self, group: &Group) -> Result<Vec<Element>, ParseError> {
        self.list().into_iter().map(|t| self.element(group, t)).collect()
    }
}

fn lex(text: &str) -> Result<Vec<Section>, Vec<ParseError>> {
    let mut sections: Vec<Section> = Vec::new();
    let mut errors = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        if let Some(header) = trimmed.strip_prefix('[') {
            let header = header.strip_suffix(']').map(str::split_whitespace).map(|w| w.collect::<Vec<_>>());
            match header.as_deref() {
                Some([kind, name]) if ["group", "morphism", "target", "problem"].contains(kind) => {
                    sections.push(Section {
                        kind: kind.to_string(),
                        name: name.to_string(),
                        line,
                        entries: Vec::new(),
                    })
                }
                _ => errors.push(ParseError {
                    line,
                    column: indent + 1,
                    message: format!("expected `[group|morphism|target|problem NAME]`, got `{trimmed}`"),
                }),
            }
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            errors.push(ParseError {
                line,
                column: indent + 1,
                message: format!("expected `key = value`, got `{trimmed}`"),
            });
            continue;
        };
        let Some(section) = sections.last_mut() else {
            errors.push(ParseError {
                line,
                column: indent + 1,
                message: "entry outside of any section".into(),
            });
            continue;
        };
        let value_start = key.len() + 1 + (value.len() - value.trim_start().len());
        section.entries.push(Entry {
            key: key.trim().to_string(),
            value: value.trim().to_string(),
            line,
            column: value_start + 1,
        });
    }
    if errors.is_empty() {
        Ok(sections)
    } else {
        Err(errors)
    }
}

fn names(entry: &Entry) -> Vec<String> {
    entry.value.split_whitespace().map(String::from).collect()
}

fn matrix(entry: &Entry) -> Result<IntMatrix, ParseError> {
    let rows: Vec<Vec<i64>> = entry
        .list()
        .into_iter()
        .map(|row| row.split_whitespace().map(str::parse).collect::<Result<Vec<i64>, _>>())
        .collect::<Result<_, _>>()
        .map_err(|_| entry.err("matrix rows must be integers separated by spaces"))?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
        return Err(entry.err("matrix must be square"));
    }
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Ok(IntMatrix::from_i64(&refs))
}

#[derive(Default)]
struct Scope {
    file: ProblemFile,
    groups: HashMap<String, usize>,
    morphisms: HashMap<String, usize>,
    targets: HashMap<String, usize>,
}

impl Scope {
    fn group(&self, entry: &Entry) -> Result<Group, ParseError> {
        self.groups
            .get(&entry.value)
            .map(|&i| self.file.groups[i].value.clone())
            .ok_or_else(|| entry.err(format!("undefined group `{}`", entry.value)))
    }

    fn morphism(&self, entry: &Entry) -> Result<Morphism, ParseError> {
        self.morphisms
            .get(&entry.value)
            .map(|&i| self.file.morphisms[i].value.clone())
            .ok_or_else(|| entry.err(format!("undefined morphism `{}`", entry.value)))
    }

    fn declare(&mut self, s: &Section) -> Result<(), ParseError> {
        let taken = match s.kind.as_str() {
            "group" => self.groups.contains_key(&s.name),
            "morphism" => self.morphisms.contains_key(&s.name),
            "target" => self.targets.contains_key(&s.name),
            _ => self.file.problems.iter().any(|p| p.name == s.name),
        };
        if taken {
            return Err(s.err("declared twice"));
        }
        let entries = s.entries.iter().map(|e| (e.key.clone(), e.value.clone())).collect();
        match s.kind.as_str() {
            "group" => {
                let value = self.build_group(s)?;
                self.groups.insert(s.name.clone(), self.file.groups.len());
                self.file.order.push(SectionRef::Group(self.file.groups.len()));
                self.file.groups.push(Declared {
                    name: s.name.clone(),
                    entries,
                    value,
                });
            }
            "morphism" => {
                let value = self.build_morphism(s)?;
                self.morphisms.insert(s.name.clone(), self.file.morphisms.len());
                self.file.order.push(SectionRef::Morphism(self.file.morphisms.len()));
                self.file.morphisms.push(Declared {
                    name: s.name.clone(),
                    entries,
                    value,
                });
            }
            "target" => {
                let decl = self.build_target(s)?;
                self.targets.insert(s.name.clone(), self.file.targets.len());
                self.file.order.push(SectionRef::Target(self.file.targets.len()));
                self.file.targets.push(decl);
            }
            _ => {
                let decl = self.build_problem(s)?;
                self.file.order.push(SectionRef::Problem(self.file.problems.len()));
                self.file.problems.push(decl);
            }
        }
        Ok(())
    }

    fn build_group(&self, s: &Section) -> Result<Group, ParseError> {
        let kind = s.require("kind")?;
        let wrap = |r: genconj::Result<Group>| r.map_err(|e| kind.err(e.to_string()));
        match kind.value.as_str() {
            "free" => Ok(Group::free(names(s.require("generators")?))),
            "abelian" => match (s.get("generators"), s.get("rank")) {
                (Some(g), _) => Ok(Group::abelian_named(names(g))),
                (None, Some(r)) => Ok(Group::abelian(r.number()?)),
                _ => Err(s.err("abelian groups need `generators` or `rank`")),
            },
            "cyclic" => {
                let n: usize = s.require("order")?.number()?;
                if n == 0 {
                    return Err(s.require("order")?.err("order must be positive"));
                }
                Ok(Group::cyclic(n))
            }
            "permutations" => {
                let e = s.require("permutations")?;
                let perms = e
                    .list()
                    .into_iter()
                    .map(|p| p.split_whitespace().map(str::parse).collect::<Result<Vec<usize>, _>>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| e.err("permutations are lists of point images"))?;
                Group::from_permutations(&perms).map_err(|err| e.err(err.to_string()))
            }
            "table" => {
                let e = s.require("table")?;
                let table = e
                    .list()
                    .into_iter()
                    .map(|p| p.split_whitespace().map(str::parse).collect::<Result<Vec<usize>, _>>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| e.err("table rows are lists of indices"))?;
                let g = s.require("generators")?;
                let gens = g
                    .value
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<Result<Vec<usize>, _>>()
                    .map_err(|_| g.err("generators are table indices"))?;
                Group::finite(table, gens).map_err(|err| e.err(err.to_string()))
            }
            "semidirect" => {
                let phi = self.morphism(s.require("morphism")?)?;
                let base = self.group(s.require("base")?)?;
                if phi.domain() != &base {
                    return Err(s.require("morphism")?.err("morphism is not defined on the base group"));
                }
                wrap(Group::semidirect(base, phi))
            }
            "virtually-free" => self.build_virtually_free(s),
            other => Err(kind.err(format!(
                "unknown group kind `{other}` (free, abelian, cyclic, permutations, table, semidirect, virtually-free)"
            ))),
        }
    }

    fn build_virtually_free(&self, s: &Section) -> Result<Group, ParseError> {
        let free = Group::free(names(s.require("generators")?));
        let cosets_entry = s.require("cosets")?;
        let cosets = names(cosets_entry);
        let index = |e: &Entry, name: &str| {
            cosets
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| e.err(format!("unknown coset `{name}`")))
        };
        let identity = match s.get("identity") {
            Some(e) => index(e, &e.value)?,
            None => 0,
        };
        let gen_names = free.generator_names();
        let rank = gen_names.len();
        let word = |e: &Entry, text: &str| parse_word(text, &gen_names).map_err(|m| e.err(m));
        let mut action: Vec<Vec<Word>> = (0..cosets.len())
            .map(|_| (0..rank).map(|i| Word::letter(genconj::Letter::gen(i))).collect())
            .collect();
        let mut products: Vec<Vec<Option<(Word, usize)>>> = vec![vec![None; cosets.len()]; cosets.len()];
        for i in 0..cosets.len() {
            products[identity][i] = Some((Word::identity(), i));
            products[i][identity] = Some((Word::identity(), i));
        }
        for e in &s.entries {
            let parts: Vec<&str> = e.key.split_whitespace().collect();
            match parts.as_slice() {
                ["action", c] => {
                    let c = index(e, c)?;
                    let images = e.list();
                    if images.len() != rank {
                        return Err(e.err(format!("expected {rank} images")));
                    }
                    action[c] = images.into_iter().map(|t| word(e, t)).collect::<Result<_, _>>()?;
                }
                ["product", c, d] => {
                    let (c, d) = (index(e, c)?, index(e, d)?);
                    let (w, r) = match e.value.split_once('@') {
                        Some((w, r)) => (w.trim(), r.trim()),
                        None => return Err(e.err("expected `WORD @ COSET`")),
                    };
                    products[c][d] = Some((word(e, w)?, index(e, r)?));
                }
                _ => {}
            }
        }
        let products = products
            .into_iter()
            .enumerate()
            .map(|(c, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(d, p)| p.ok_or_else(|| s.err(format!("missing `product {} {}`", cosets[c], cosets[d]))))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Group::virtually_free(free, cosets, identity, action, products).map_err(|e| s.err(e.to_string()))
    }

    fn build_morphism(&self, s: &Section) -> Result<Morphism, ParseError> {
        let group_entry = s.require("group")?;
        let group = self.group(group_entry)?;
        let codomain = match s.get("codomain") {
            Some(e) => self.group(e)?,
            None => group.clone(),
        };
        let mut phi = if let Some(e) = s.get("matrix") {
            let m = matrix(e)?;
            let auto = s.get("automorphism").map(Entry::flag).transpose()?.unwrap_or(false);
            let built = if auto {
                Morphism::automorphism_from_matrix(&group, &m)
            } else {
                Morphism::from_matrix(&group, &m)
            };
            built.map_err(|err| e.err(err.to_string()))?
        } else if let Some(e) = s.get("inner") {
            let x = e.element(&group, &e.value)?;
            Morphism::inner(&group, &x).map_err(|err| e.err(err.to_string()))?
        } else if let Some(e) = s.get("images") {
            let images = e.elements(&codomain)?;
            Morphism::new(&group, &codomain, images).map_err(|err| e.err(err.to_string()))?
        } else {
            return Err(s.err("morphisms need `images`, `matrix` or `inner`"));
        };
        if let Some(e) = s.get("inverse") {
            let inv = e.elements(&group)?;
            phi = phi.with_inverse(inv).map_err(|err| e.err(err.to_string()))?;
        }
        if let Some(e) = s.get("witness") {
            let power: u32 = s.require("witness-power")?.number()?;
            let x = e.element(&group, &e.value)?;
            phi = phi.with_witness(power, x).map_err(|err| e.err(err.to_string()))?;
        }
        Ok(phi)
    }

    fn build_target(&self, s: &Section) -> Result<TargetDecl, ParseError> {
        let group_entry = s.require("group")?;
        let group = self.group(group_entry)?;
        let kind = s.require("kind")?;
        let gens = |s: &Section| s.require("generators")?.elements(&group);
        let shape = match kind.value.as_str() {
            "finite" => TargetShape::Finite(s.require("elements")?.elements(&group)?),
            "subgroup" => TargetShape::Subgroup(gens(s)?),
            "coset" => {
                let rep = s.require("rep")?;
                TargetShape::Coset(rep.element(&group, &rep.value)?, gens(s)?)
            }
            other => return Err(kind.err(format!("unknown target kind `{other}` (finite, subgroup, coset)"))),
        };
        let target = match &shape {
            TargetShape::Finite(e) => Target::finite(&group, e.clone()),
            TargetShape::Subgroup(g) => Target::subgroup(&group, g),
            TargetShape::Coset(r, g) => Target::coset(&group, r.clone(), g),
        }
        .map_err(|e| kind.err(e.to_string()))?;
        Ok(TargetDecl {
            name: s.name.clone(),
            group: group_entry.value.clone(),
            shape,
            target,
        })
    }

    fn build_problem(&self, s: &Section) -> Result<ProblemDecl, ParseError> {
        let kind_entry = s.require("kind")?;
        let kind: ProblemKind = kind_entry.value.parse().map_err(|e: genconj::Error| kind_entry.err(e.to_string()))?;
        let group_entry = s.require("group")?;
        let group = self.group(group_entry)?;
        let (morphism_name, morphism) = match s.get("morphism") {
            Some(e) => (Some(e.value.clone()), Some(self.morphism(e)?)),
            None => (None, None),
        };
        let subject = s.require("subject")?;
        let subject_el = subject.element(&group, &subject.value)?;
        let (target_ref, target) = match (s.get("target"), s.get("element")) {
            (Some(e), None) => {
                let decl = self
                    .targets
                    .get(&e.value)
                    .map(|&i| &self.file.targets[i])
                    .ok_or_else(|| e.err(format!("undefined target `{}`", e.value)))?;
                if decl.group != group_entry.value {
                    return Err(e.err(format!("target lives in group `{}`", decl.group)));
                }
                (TargetRef::Named(e.value.clone()), decl.target.clone())
            }
            (None, Some(e)) => {
                let h = e.element(&group, &e.value)?;
                (TargetRef::Element(h.clone()), Target::Finite(vec![h]))
            }
            _ => return Err(s.err("give exactly one of `target` or `element`")),
        };
        let mut budget = BudgetOverrides::default();
        for e in &s.entries {
            match e.key.as_str() {
                "max-exponent" => budget.max_exponent = Some(e.number()?),
                "ball-radius" => budget.ball_radius = Some(e.number()?),
                "max-quotient-size" => budget.max_quotient_size = Some(e.number()?),
                "max-steps" => budget.max_steps = Some(e.number()?),
                "generic-quotient-fallback" => budget.generic_quotient_fallback = Some(e.flag()?),
                _ => {}
            }
        }
        let instance = ProblemInstance::new(kind, group, morphism, subject_el, target)
            .map_err(|e| kind_entry.err(e.to_string()))?;
        Ok(ProblemDecl {
            name: s.name.clone(),
            group: group_entry.value.clone(),
            morphism: morphism_name,
            target: target_ref,
            budget,
            instance,
        })
    }
}

/// Parses and validates a problem file, reporting every located error.
pub fn parse(text: &str) -> Result<ProblemFile, Vec<ParseError>> {
    let sections = lex(text)?;
    let mut scope = Scope::default();
    let mut errors = Vec::new();
    for s in &sections {
        if let Err(e) = scope.declare(s) {
            errors.push(e);
        }
    }
    if errors.is_empty() {
        Ok(scope.file)
    } else {
        Err(errors)
    }
}

impl ProblemFile {
    /// Text that [`parse`] reads back to an identical model.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut section = |kind: &str, name: &str, entries: &[(String, String)]| {
            if !out.is_empty() {
                out.push('\n');
            }
            let _ = writeln!(out, "[{kind} {name}]");
            for (k, v) in entries {
                let _ = writeln!(out, "{k} = {v}");
            }
        };
        let group_of = |name: &str| &self.groups.iter().find(|g| g.name == name).unwrap().value;
        let list = |g: &Group, elems: &[Element]| elems.iter().map(|e| g.format(e)).collect::<Vec<_>>().join("; ");
        for r in &self.order {
            match *r {
                SectionRef::Group(i) => section("group", &self.groups[i].name, &self.groups[i].entries),
                SectionRef::Morphism(i) => section("morphism", &self.morphisms[i].name, &self.morphisms[i].entries),
                SectionRef::Target(i) => {
                    let t = &self.targets[i];
                    let g = group_of(&t.group);
                    let mut entries = vec![("group".to_string(), t.group.clone())];
                    match &t.shape {
                        TargetShape::Finite(e) => {
                            entries.push(("kind".into(), "finite".into()));
                            entries.push(("elements".into(), list(g, e)));
                        }
                        TargetShape::Subgroup(gens) => {
                            entries.push(("kind".into(), "subgroup".into()));
                            entries.push(("generators".into(), list(g, gens)));
                        }
                        TargetShape::Coset(rep, gens) => {
                            entries.push(("kind".into(), "coset".into()));
                            entries.push(("rep".into(), g.format(rep)));
                            entries.push(("generators".into(), list(g, gens)));
                        }
                    }
                    section("target", &t.name, &entries);
                }
                SectionRef::Problem(i) => {
                    let p = &self.problems[i];
                    let g = group_of(&p.group);
                    let mut entries = vec![
                        ("kind".to_string(), p.instance.kind.name().to_string()),
                        ("group".to_string(), p.group.clone()),
                    ];
                    if let Some(m) = &p.morphism {
                        entries.push(("morphism".into(), m.clone()));
                    }
                    entries.push(("subject".into(), g.format(&p.instance.subject)));
                    match &p.target {
                        TargetRef::Named(n) => entries.push(("target".into(), n.clone())),
                        TargetRef::Element(h) => entries.push(("element".into(), g.format(h))),
                    }
                    entries.extend(p.budget.entries().into_iter().map(|(k, v)| (k.to_string(), v)));
                    section("problem", &p.name, &entries);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAT: &str = "[group Z2]\nkind = abelian\nrank = 2\n\n[morphism cat]\ngroup = Z2\nmatrix = 2 1; 1 1\nautomorphism = true\n\n[problem orbit]\nkind = brp\ngroup = Z2\nmorphism = cat\nsubject = (1,0)\nelement = (5,3)\n";

    #[test]
    fn minimal_file_parses() {
        let f = parse(CAT).unwrap();
        assert_eq!(f.problems.len(), 1);
        assert_eq!(f.problems[0].instance.kind, ProblemKind::Brp);
    }

    #[test]
    fn empty_file_has_no_problems() {
        assert!(parse("").unwrap().problems.is_empty());
        assert!(parse("# nothing\n\n").unwrap().problems.is_empty());
    }

    #[test]
    fn undefined_morphism_is_located() {
        let text = CAT.replace("morphism = cat", "morphism = dog");
        let errs = parse(&text).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].line, 13);
        assert_eq!(errs[0].column, 12);
        assert!(errs[0].message.contains("undefined morphism `dog`"));
    }

    #[test]
    fn singular_automorphism_is_rejected() {
        let text = CAT.replace("2 1; 1 1", "2 1; 2 1");
        let errs = parse(&text).unwrap_err();
        assert_eq!(errs[0].line, 7);
    }

    #[test]
    fn malformed_word_is_located() {
        let text = "[group F]\nkind = free\ngenerators = a b\n\n[problem p]\nkind = cp\ngroup = F\nsubject = a c\nelement = a\n";
        let errs = parse(text).unwrap_err();
        assert_eq!((errs[0].line, errs[0].column), (8, 11));
        assert!(errs[0].message.contains("unknown generator `c`"));
    }

    #[test]
    fn serialized_files_parse_back_identically() {
        let f = parse(CAT).unwrap();
        assert_eq!(parse(&f.to_text()).unwrap(), f);
    }
}
