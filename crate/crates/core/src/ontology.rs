//! Factorized label spaces.
//!
//! An ontology file lists object categories in a fixed order, each with a
//! group (`animate`, `inanimate` or `noparts`) and an ordered list of raw part
//! names. Every derived label set (objects, animate roots, inanimate roots,
//! left/right, front/back, monolithic) is a pure function of that order, with
//! background at id 0 everywhere.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::error::{Error, Result};

/// Environment variable naming a directory searched for ontology files.
pub const ONTOLOGY_DIR_ENV: &str = "FLOAT_ONTOLOGY_DIR";

const BUILTIN: &[(&str, &str)] = &[
    ("pp58", include_str!("../ontologies/pp58.json")),
    ("pp108", include_str!("../ontologies/pp108.json")),
    ("pp201", include_str!("../ontologies/pp201.json")),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
    Front,
    Back,
}

/// The two independent side dimensions. Each has its own label set
/// `{background, first, second}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SideAxis {
    LeftRight,
    FrontBack,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Left, Side::Right, Side::Front, Side::Back];

    pub fn token(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::Front => "front",
            Side::Back => "back",
        }
    }

    pub fn from_token(token: &str) -> Option<Side> {
        Side::ALL.into_iter().find(|s| s.token() == token)
    }

    pub fn axis(self) -> SideAxis {
        match self {
            Side::Left | Side::Right => SideAxis::LeftRight,
            Side::Front | Side::Back => SideAxis::FrontBack,
        }
    }

    /// Id within the side's own label set (left/front = 1, right/back = 2).
    pub fn id(self) -> u16 {
        match self {
            Side::Left | Side::Front => 1,
            Side::Right | Side::Back => 2,
        }
    }

    pub fn from_id(axis: SideAxis, id: u16) -> Option<Side> {
        match (axis, id) {
            (SideAxis::LeftRight, 1) => Some(Side::Left),
            (SideAxis::LeftRight, 2) => Some(Side::Right),
            (SideAxis::FrontBack, 1) => Some(Side::Front),
            (SideAxis::FrontBack, 2) => Some(Side::Back),
            _ => None,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// At most one left/right token and at most one front/back token.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct SideSet {
    pub lr: Option<Side>,
    pub fb: Option<Side>,
}

impl SideSet {
    pub const NONE: SideSet = SideSet { lr: None, fb: None };

    pub fn new(lr: Option<Side>, fb: Option<Side>) -> Self {
        debug_assert!(lr.is_none_or(|s| s.axis() == SideAxis::LeftRight));
        debug_assert!(fb.is_none_or(|s| s.axis() == SideAxis::FrontBack));
        SideSet { lr, fb }
    }

    pub fn single(side: Side) -> Self {
        match side.axis() {
            SideAxis::LeftRight => SideSet { lr: Some(side), fb: None },
            SideAxis::FrontBack => SideSet { lr: None, fb: Some(side) },
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lr.is_none() && self.fb.is_none()
    }

    pub fn len(&self) -> usize {
        self.lr.is_some() as usize + self.fb.is_some() as usize
    }

    /// Which side slots this set occupies.
    pub fn slots(&self) -> SideSlots {
        SideSlots { lr: self.lr.is_some(), fb: self.fb.is_some() }
    }

    pub fn get(&self, axis: SideAxis) -> Option<Side> {
        match axis {
            SideAxis::LeftRight => self.lr,
            SideAxis::FrontBack => self.fb,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Side> {
        self.lr.into_iter().chain(self.fb)
    }
}

/// The side-requirement signature of a part: which side maps must supply a
/// value for the part to be spelled out.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct SideSlots {
    pub lr: bool,
    pub fb: bool,
}

impl SideSlots {
    pub fn len(&self) -> usize {
        self.lr as usize + self.fb as usize
    }

    pub fn is_empty(&self) -> bool {
        !self.lr && !self.fb
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Animate,
    Inanimate,
    #[serde(rename = "noparts")]
    NoParts,
}

impl Group {
    fn parse(s: &str) -> Option<Group> {
        match s {
            "animate" => Some(Group::Animate),
            "inanimate" => Some(Group::Inanimate),
            "noparts" => Some(Group::NoParts),
            _ => None,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Animate => "animate",
            Group::Inanimate => "inanimate",
            Group::NoParts => "noparts",
        })
    }
}

/// Which id table interprets the values of a label map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LabelSet {
    Object,
    AnimateRoot,
    InanimateRoot,
    LeftRight,
    FrontBack,
    Monolithic,
}

impl LabelSet {
    pub const ALL: [LabelSet; 6] = [
        LabelSet::Object,
        LabelSet::AnimateRoot,
        LabelSet::InanimateRoot,
        LabelSet::LeftRight,
        LabelSet::FrontBack,
        LabelSet::Monolithic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LabelSet::Object => "object",
            LabelSet::AnimateRoot => "animate",
            LabelSet::InanimateRoot => "inanimate",
            LabelSet::LeftRight => "lr",
            LabelSet::FrontBack => "fb",
            LabelSet::Monolithic => "monolithic",
        }
    }

    pub fn from_name(name: &str) -> Option<LabelSet> {
        LabelSet::ALL.into_iter().find(|s| s.name() == name)
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartLabelError {
    #[error("part label `{0}` has duplicate or conflicting side tokens")]
    ConflictingSides(String),
    #[error("part label `{0}` has no root component")]
    EmptyRoot(String),
    #[error("inanimate part label `{0}` carries more than one side token")]
    TooManySides(String),
    #[error("part label `{0}` must be lowercase ASCII words")]
    InvalidToken(String),
    #[error("category `{0}` has no parts")]
    NoPartsCategory(String),
}

/// A monolithic part name decomposed into category, root and sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartLabel {
    pub category: String,
    pub root: String,
    pub sides: SideSet,
}

impl PartLabel {
    /// Canonical raw part string: side tokens first (left/right before
    /// front/back), then the root.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for side in self.sides.iter() {
            out.push_str(side.token());
            out.push(' ');
        }
        out.push_str(&self.root);
        out
    }

    /// `category part`, e.g. `cow left front lower leg`.
    pub fn full_name(&self) -> String {
        format!("{} {}", self.category, self.render())
    }
}

impl fmt::Display for PartLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.full_name())
    }
}

/// Splits a raw part name into sides and root.
///
/// Leading side tokens are sides; everything from the first non-side token on
/// is the root, so `upper`/`lower` always stay in the root.
pub fn parse_part_label(
    raw: &str,
    category: &str,
    group: Group,
) -> std::result::Result<PartLabel, PartLabelError> {
    if group == Group::NoParts {
        return Err(PartLabelError::NoPartsCategory(category.to_owned()));
    }
    let tokens: Vec<&str> = raw.split_whitespace().collect();
    if tokens
        .iter()
        .any(|t| !t.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-'))
    {
        return Err(PartLabelError::InvalidToken(raw.to_owned()));
    }

    let mut sides = SideSet::NONE;
    let mut rest = tokens.as_slice();
    while let Some((first, tail)) = rest.split_first() {
        let Some(side) = Side::from_token(first) else { break };
        let slot = match side.axis() {
            SideAxis::LeftRight => &mut sides.lr,
            SideAxis::FrontBack => &mut sides.fb,
        };
        if slot.is_some() {
            return Err(PartLabelError::ConflictingSides(raw.to_owned()));
        }
        *slot = Some(side);
        rest = tail;
    }
    if rest.is_empty() {
        return Err(PartLabelError::EmptyRoot(raw.to_owned()));
    }
    if group == Group::Inanimate && sides.len() > 1 {
        return Err(PartLabelError::TooManySides(raw.to_owned()));
    }
    Ok(PartLabel { category: category.to_owned(), root: rest.join(" "), sides })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryDef {
    pub name: String,
    pub group: Group,
    pub parts: Vec<PartLabel>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Schema(String),
    /// `part == None` means the category itself is listed twice.
    DuplicatePart { category: String, part: Option<String> },
    GroupViolation { category: String, reason: String },
    BadPart { category: String, error: PartLabelError },
    TooManyLabels(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Schema(msg) => write!(f, "schema: {msg}"),
            Violation::DuplicatePart { category, part: None } => {
                write!(f, "duplicate part: category `{category}` listed more than once")
            }
            Violation::DuplicatePart { category, part: Some(p) } => {
                write!(f, "duplicate part: `{category} {p}`")
            }
            Violation::GroupViolation { category, reason } => {
                write!(f, "group violation in `{category}`: {reason}")
            }
            Violation::BadPart { category, error } => write!(f, "in `{category}`: {error}"),
            Violation::TooManyLabels(n) => write!(f, "{n} monolithic labels exceed the 16-bit id range"),
        }
    }
}

/// Every problem found while validating an ontology document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct OntologyError {
    pub violations: Vec<Violation>,
}

impl fmt::Display for OntologyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid ontology ({} violation(s))", self.violations.len())?;
        for v in &self.violations {
            write!(f, "\n  - {v}")?;
        }
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOntology {
    version: String,
    categories: Vec<RawCategory>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCategory {
    name: String,
    group: String,
    #[serde(default)]
    parts: Vec<String>,
}

/// What a monolithic id means in factored terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decomposition {
    /// Object label id (category index + 1).
    pub object: u16,
    pub group: Group,
    /// Root id in the group's root label set; 0 for noparts categories.
    pub root: u16,
    pub sides: SideSet,
}

/// A declared part reachable from an (object, root) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub sides: SideSet,
    pub monolithic: u16,
}

#[derive(Debug, Clone)]
pub struct Ontology {
    version: String,
    categories: Vec<CategoryDef>,
    category_index: HashMap<String, usize>,
    animate_roots: Vec<String>,
    inanimate_roots: Vec<String>,
    animate_index: HashMap<String, u16>,
    inanimate_index: HashMap<String, u16>,
    /// Indexed by monolithic id; entry 0 is background.
    monolithic: Vec<Decomposition>,
    monolithic_names: Vec<String>,
    signatures: HashMap<(u16, u16), Vec<Signature>>,
    has_sides: bool,
}

impl PartialEq for Ontology {
    fn eq(&self, other: &Self) -> bool {
        self.version == other.version && self.categories == other.categories
    }
}

impl Ontology {
    /// Parses and validates an ontology document.
    pub fn load(document: &[u8]) -> std::result::Result<Ontology, OntologyError> {
        let raw: RawOntology = serde_json::from_slice(document).map_err(|e| OntologyError {
            violations: vec![Violation::Schema(e.to_string())],
        })?;
        let mut violations = Vec::new();
        if raw.version.trim().is_empty() {
            violations.push(Violation::Schema("`version` must be non-empty".into()));
        }

        let mut categories: Vec<CategoryDef> = Vec::with_capacity(raw.categories.len());
        let mut seen_categories: HashMap<String, usize> = HashMap::new();
        for rc in &raw.categories {
            let name = rc.name.trim().to_owned();
            if name.is_empty() || name.contains(char::is_whitespace) || name != name.to_lowercase()
            {
                violations.push(Violation::Schema(format!(
                    "category name `{}` must be a single lowercase word",
                    rc.name
                )));
            }
            if name == "background" {
                violations.push(Violation::Schema("`background` is reserved".into()));
            }
            if seen_categories.insert(name.clone(), categories.len()).is_some() {
                violations.push(Violation::DuplicatePart { category: name.clone(), part: None });
            }
            let Some(group) = Group::parse(&rc.group) else {
                violations.push(Violation::Schema(format!(
                    "category `{name}` has unknown group `{}`",
                    rc.group
                )));
                continue;
            };
            match (group, rc.parts.is_empty()) {
                (Group::NoParts, false) => violations.push(Violation::GroupViolation {
                    category: name.clone(),
                    reason: "noparts category lists parts".into(),
                }),
                (Group::Animate | Group::Inanimate, true) => {
                    violations.push(Violation::GroupViolation {
                        category: name.clone(),
                        reason: format!("{group} category lists no parts"),
                    })
                }
                _ => {}
            }
            let mut parts: Vec<PartLabel> = Vec::new();
            if group != Group::NoParts {
                for raw_part in &rc.parts {
                    match parse_part_label(raw_part, &name, group) {
                        Ok(p) => {
                            if parts.iter().any(|q| q.root == p.root && q.sides == p.sides) {
                                violations.push(Violation::DuplicatePart {
                                    category: name.clone(),
                                    part: Some(p.render()),
                                });
                            } else {
                                parts.push(p);
                            }
                        }
                        Err(error) => violations
                            .push(Violation::BadPart { category: name.clone(), error }),
                    }
                }
            }
            categories.push(CategoryDef { name, group, parts });
        }

        let n_mono = 1 + categories.iter().map(|c| c.parts.len().max(1)).sum::<usize>();
        if n_mono > u16::MAX as usize || categories.len() >= u16::MAX as usize {
            violations.push(Violation::TooManyLabels(n_mono));
        }
        if !violations.is_empty() {
            return Err(OntologyError { violations });
        }
        Ok(Self::build(raw.version, categories))
    }

    fn build(version: String, categories: Vec<CategoryDef>) -> Ontology {
        let mut animate_roots = Vec::new();
        let mut inanimate_roots = Vec::new();
        let mut animate_index = HashMap::new();
        let mut inanimate_index = HashMap::new();
        let mut monolithic = vec![Decomposition {
            object: 0,
            group: Group::NoParts,
            root: 0,
            sides: SideSet::NONE,
        }];
        let mut monolithic_names = vec!["background".to_owned()];
        let mut signatures: HashMap<(u16, u16), Vec<Signature>> = HashMap::new();
        let mut category_index = HashMap::new();
        let mut has_sides = false;

        for (ci, cat) in categories.iter().enumerate() {
            let object = (ci + 1) as u16;
            category_index.insert(cat.name.clone(), ci);
            if cat.group == Group::NoParts {
                monolithic.push(Decomposition {
                    object,
                    group: Group::NoParts,
                    root: 0,
                    sides: SideSet::NONE,
                });
                monolithic_names.push(cat.name.clone());
                continue;
            }
            let (roots, index) = match cat.group {
                Group::Animate => (&mut animate_roots, &mut animate_index),
                _ => (&mut inanimate_roots, &mut inanimate_index),
            };
            for part in &cat.parts {
                let root = *index.entry(part.root.clone()).or_insert_with(|| {
                    roots.push(part.root.clone());
                    roots.len() as u16
                });
                let mono = monolithic.len() as u16;
                monolithic.push(Decomposition { object, group: cat.group, root, sides: part.sides });
                monolithic_names.push(part.full_name());
                signatures
                    .entry((object, root))
                    .or_default()
                    .push(Signature { sides: part.sides, monolithic: mono });
                has_sides |= !part.sides.is_empty();
            }
        }

        Ontology {
            version,
            categories,
            category_index,
            animate_roots,
            inanimate_roots,
            animate_index,
            inanimate_index,
            monolithic,
            monolithic_names,
            signatures,
            has_sides,
        }
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Ontology> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Ok(Ontology::load(&bytes)?)
    }

    /// One of the shipped ontologies: `pp58`, `pp108` or `pp201`.
    pub fn builtin(name: &str) -> Option<Ontology> {
        BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, doc)| {
            Ontology::load(doc.as_bytes()).expect("shipped ontology must validate")
        })
    }

    pub fn builtin_document(name: &str) -> Option<&'static str> {
        BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, doc)| *doc)
    }

    pub fn builtin_names() -> impl Iterator<Item = &'static str> {
        BUILTIN.iter().map(|(n, _)| *n)
    }

    /// Resolves a command-line ontology argument: an existing file path, then
    /// `$FLOAT_ONTOLOGY_DIR/<name>[.json]`, then a shipped ontology name.
    pub fn resolve(spec: &str) -> Result<Ontology> {
        let path = Path::new(spec);
        if path.is_file() {
            return Ontology::from_path(path);
        }
        if let Some(dir) = std::env::var_os(ONTOLOGY_DIR_ENV) {
            let dir = Path::new(&dir);
            for candidate in [dir.join(spec), dir.join(format!("{spec}.json"))] {
                if candidate.is_file() {
                    return Ontology::from_path(candidate);
                }
            }
        }
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec);
        Ontology::builtin(spec).or_else(|| Ontology::builtin(stem)).ok_or_else(|| {
            Error::io(path, std::io::Error::new(std::io::ErrorKind::NotFound, "ontology not found"))
        })
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn categories(&self) -> &[CategoryDef] {
        &self.categories
    }

    /// Category for an object label id; `None` for background or out of range.
    pub fn category(&self, object: u16) -> Option<&CategoryDef> {
        object.checked_sub(1).and_then(|i| self.categories.get(i as usize))
    }

    pub fn object_id(&self, category: &str) -> Option<u16> {
        self.category_index.get(category).map(|&i| (i + 1) as u16)
    }

    pub fn animate_roots(&self) -> &[String] {
        &self.animate_roots
    }

    pub fn inanimate_roots(&self) -> &[String] {
        &self.inanimate_roots
    }

    /// Root id within the given group's label set.
    pub fn root_id(&self, group: Group, root: &str) -> Option<u16> {
        match group {
            Group::Animate => self.animate_index.get(root).copied(),
            Group::Inanimate => self.inanimate_index.get(root).copied(),
            Group::NoParts => None,
        }
    }

    pub fn root_name(&self, group: Group, id: u16) -> Option<&str> {
        let roots = match group {
            Group::Animate => &self.animate_roots,
            Group::Inanimate => &self.inanimate_roots,
            Group::NoParts => return None,
        };
        id.checked_sub(1).and_then(|i| roots.get(i as usize)).map(String::as_str)
    }

    /// Whether any part carries a side token, i.e. whether a side decoder exists.
    pub fn has_side_decoder(&self) -> bool {
        self.has_sides
    }

    /// Number of ids in a label set, background included.
    pub fn label_set_size(&self, set: LabelSet) -> usize {
        match set {
            LabelSet::Object => self.categories.len() + 1,
            LabelSet::AnimateRoot => self.animate_roots.len() + 1,
            LabelSet::InanimateRoot => self.inanimate_roots.len() + 1,
            LabelSet::LeftRight | LabelSet::FrontBack => 3,
            LabelSet::Monolithic => self.monolithic.len(),
        }
    }

    /// Total output channels of the factored model: object, animate and
    /// inanimate decoders, plus the two side decoders when any part is sided.
    pub fn output_head_count(&self) -> usize {
        let mut n = self.label_set_size(LabelSet::Object)
            + self.label_set_size(LabelSet::AnimateRoot)
            + self.label_set_size(LabelSet::InanimateRoot);
        if self.has_sides {
            n += self.label_set_size(LabelSet::LeftRight) + self.label_set_size(LabelSet::FrontBack);
        }
        n
    }

    /// Monolithic id of an exact (category, root, sides) triple. An empty
    /// root with no sides names the bare category of a noparts category.
    pub fn lookup_monolithic(&self, category: &str, root: &str, sides: SideSet) -> Result<Option<u16>> {
        let object =
            self.object_id(category).ok_or_else(|| Error::UnknownCategory(category.to_owned()))?;
        let cat = self.category(object).expect("object id from index");
        if cat.group == Group::NoParts {
            if root.is_empty() && sides.is_empty() {
                return Ok(self.bare_id(object));
            }
            return Ok(None);
        }
        let Some(root) = self.root_id(cat.group, root) else { return Ok(None) };
        Ok(self.lookup_ids(object, root, sides))
    }

    /// Same lookup on numeric ids (object id, group root id).
    pub fn lookup_ids(&self, object: u16, root: u16, sides: SideSet) -> Option<u16> {
        self.signatures
            .get(&(object, root))?
            .iter()
            .find(|s| s.sides == sides)
            .map(|s| s.monolithic)
    }

    /// Declared parts for an (object id, root id) pair.
    pub fn signatures(&self, object: u16, root: u16) -> &[Signature] {
        self.signatures.get(&(object, root)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Monolithic id of a noparts category's whole-object label.
    pub fn bare_id(&self, object: u16) -> Option<u16> {
        let cat = self.category(object)?;
        if cat.group != Group::NoParts {
            return None;
        }
        self.monolithic
            .iter()
            .position(|d| d.object == object && d.group == Group::NoParts)
            .map(|i| i as u16)
    }

    pub fn decompose(&self, monolithic: u16) -> Option<&Decomposition> {
        self.monolithic.get(monolithic as usize)
    }

    pub fn monolithic_name(&self, id: u16) -> Option<&str> {
        self.monolithic_names.get(id as usize).map(String::as_str)
    }

    pub fn monolithic_names(&self) -> &[String] {
        &self.monolithic_names
    }

    /// Monolithic ids belonging to an object id, in id order. Object id 0
    /// yields `[0]` (background is its own category for the metrics).
    pub fn monolithic_ids_of(&self, object: u16) -> Vec<u16> {
        self.monolithic
            .iter()
            .enumerate()
            .filter(|(_, d)| d.object == object)
            .map(|(i, _)| i as u16)
            .collect()
    }

    /// Display name of an object id (`background` for 0).
    pub fn object_name(&self, object: u16) -> Option<&str> {
        if object == 0 {
            return Some("background");
        }
        self.category(object).map(|c| c.name.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(json: &str) -> std::result::Result<Ontology, OntologyError> {
        Ontology::load(json.as_bytes())
    }

    #[test]
    fn parses_two_sides_and_root() {
        let p = parse_part_label("left front leg", "cow", Group::Animate).unwrap();
        assert_eq!(p.root, "leg");
        assert_eq!(p.sides, SideSet::new(Some(Side::Left), Some(Side::Front)));
    }

    #[test]
    fn upper_lower_stay_in_root() {
        let p = parse_part_label("left lower arm", "person", Group::Animate).unwrap();
        assert_eq!(p.root, "lower arm");
        assert_eq!(p.sides, SideSet::single(Side::Left));
    }

    #[test]
    fn unsided_inanimate_part() {
        let p = parse_part_label("body", "bicycle", Group::Inanimate).unwrap();
        assert_eq!(p.root, "body");
        assert!(p.sides.is_empty());
    }

    #[test]
    fn conflicting_and_duplicate_sides_rejected() {
        for raw in ["left right leg", "left left leg", "front back leg"] {
            assert!(matches!(
                parse_part_label(raw, "cow", Group::Animate),
                Err(PartLabelError::ConflictingSides(_))
            ));
        }
    }

    #[test]
    fn sides_only_is_empty_root() {
        assert!(matches!(
            parse_part_label("left front", "cow", Group::Animate),
            Err(PartLabelError::EmptyRoot(_))
        ));
    }

    #[test]
    fn side_tokens_after_root_belong_to_root() {
        let p = parse_part_label("coach left side", "train", Group::Inanimate).unwrap();
        assert_eq!(p.root, "coach left side");
        assert!(p.sides.is_empty());
    }

    #[test]
    fn inanimate_part_takes_one_side() {
        assert!(matches!(
            parse_part_label("left front wheel", "car", Group::Inanimate),
            Err(PartLabelError::TooManySides(_))
        ));
    }

    #[test]
    fn render_is_canonical() {
        let p = parse_part_label("front  left   leg", "cow", Group::Animate).unwrap();
        assert_eq!(p.render(), "left front leg");
    }

    #[test]
    fn minimal_noparts_ontology() {
        let o = doc(r#"{"version":"t","categories":[{"name":"boat","group":"noparts","parts":[]}]}"#)
            .unwrap();
        assert_eq!(o.label_set_size(LabelSet::Object), 2);
        assert!(o.animate_roots().is_empty());
        assert!(o.inanimate_roots().is_empty());
        assert_eq!(o.lookup_monolithic("boat", "", SideSet::NONE).unwrap(), Some(1));
        assert_eq!(o.output_head_count(), 4);
    }

    #[test]
    fn duplicate_category_and_part_reported() {
        let err = doc(
            r#"{"version":"t","categories":[
                {"name":"cow","group":"animate","parts":["head","head"]},
                {"name":"cow","group":"animate","parts":["leg"]}]}"#,
        )
        .unwrap_err();
        assert!(err
            .violations
            .contains(&Violation::DuplicatePart { category: "cow".into(), part: None }));
        assert!(err.violations.contains(&Violation::DuplicatePart {
            category: "cow".into(),
            part: Some("head".into())
        }));
    }

    #[test]
    fn every_violation_is_enumerated() {
        let err = doc(
            r#"{"version":"t","categories":[
                {"name":"boat","group":"noparts","parts":["hull"]},
                {"name":"cow","group":"animate","parts":["left right leg", "left"]},
                {"name":"cat","group":"furry","parts":[]}]}"#,
        )
        .unwrap_err();
        assert_eq!(err.violations.len(), 4, "{err}");
    }

    #[test]
    fn schema_error_on_bad_json() {
        let err = doc(r#"{"version":"t"}"#).unwrap_err();
        assert!(matches!(err.violations[0], Violation::Schema(_)));
    }

    #[test]
    fn pooled_roots_and_file_order_ids() {
        let o = doc(
            r#"{"version":"t","categories":[
                {"name":"cow","group":"animate","parts":["head","left leg","right leg"]},
                {"name":"boat","group":"noparts","parts":[]},
                {"name":"dog","group":"animate","parts":["leg","head"]},
                {"name":"car","group":"inanimate","parts":["front wheel"]}]}"#,
        )
        .unwrap();
        assert_eq!(o.animate_roots(), ["head", "leg"]);
        assert_eq!(o.inanimate_roots(), ["wheel"]);
        assert_eq!(
            o.monolithic_names(),
            [
                "background",
                "cow head",
                "cow left leg",
                "cow right leg",
                "boat",
                "dog leg",
                "dog head",
                "car front wheel"
            ]
        );
        assert_eq!(o.output_head_count(), 5 + 3 + 2 + 3 + 3);
        assert_eq!(o.bare_id(2), Some(4));
    }

    #[test]
    fn lookup_requires_exact_sides() {
        let o = Ontology::builtin("pp201").unwrap();
        let both = SideSet::new(Some(Side::Left), Some(Side::Front));
        let id = o.lookup_monolithic("cow", "lower leg", both).unwrap().unwrap();
        assert_eq!(o.monolithic_name(id), Some("cow left front lower leg"));
        assert_eq!(o.lookup_monolithic("cow", "lower leg", SideSet::single(Side::Left)).unwrap(), None);
        assert_eq!(o.lookup_monolithic("cow", "leg", both).unwrap(), None);
        assert_eq!(o.lookup_monolithic("cow", "wheel", SideSet::NONE).unwrap(), None);
        let boat = o.lookup_monolithic("boat", "", SideSet::NONE).unwrap().unwrap();
        assert_eq!(o.monolithic_name(boat), Some("boat"));
        assert!(matches!(
            o.lookup_monolithic("unicorn", "horn", SideSet::NONE),
            Err(Error::UnknownCategory(_))
        ));
    }

    #[test]
    fn shipped_inventories_have_expected_label_counts() {
        for (name, mono) in [("pp58", 58), ("pp108", 108), ("pp201", 201)] {
            let o = Ontology::builtin(name).unwrap();
            assert_eq!(o.label_set_size(LabelSet::Monolithic), mono, "{name}");
            assert_eq!(o.label_set_size(LabelSet::Object), 21, "{name}");
        }
    }

    #[test]
    fn pp58_has_45_heads() {
        assert_eq!(Ontology::builtin("pp58").unwrap().output_head_count(), 45);
    }

    #[test]
    fn only_pp201_has_side_decoder() {
        assert!(!Ontology::builtin("pp58").unwrap().has_side_decoder());
        assert!(!Ontology::builtin("pp108").unwrap().has_side_decoder());
        assert!(Ontology::builtin("pp201").unwrap().has_side_decoder());
    }

    #[test]
    fn group_split_follows_category_lists() {
        let o = Ontology::builtin("pp201").unwrap();
        let names = |g: Group| -> Vec<&str> {
            o.categories().iter().filter(|c| c.group == g).map(|c| c.name.as_str()).collect()
        };
        assert_eq!(names(Group::Animate), ["bird", "cat", "cow", "dog", "horse", "person", "sheep"]);
        assert_eq!(names(Group::Inanimate).len(), 9);
        assert_eq!(names(Group::NoParts), ["boat", "chair", "table", "sofa"]);
    }

    #[test]
    fn pp201_parts_decompose_into_their_group_roots() {
        let o = Ontology::builtin("pp201").unwrap();
        for id in 1..o.label_set_size(LabelSet::Monolithic) as u16 {
            let d = o.decompose(id).unwrap();
            let cat = o.category(d.object).unwrap();
            assert_eq!(cat.group, d.group);
            if d.group == Group::NoParts {
                continue;
            }
            assert!(o.root_name(d.group, d.root).is_some());
            if d.group == Group::Inanimate {
                assert!(d.sides.len() <= 1);
            }
        }
    }

    #[test]
    fn loading_twice_is_stable() {
        let doc = Ontology::builtin_document("pp201").unwrap();
        let a = Ontology::load(doc.as_bytes()).unwrap();
        let b = Ontology::load(doc.as_bytes()).unwrap();
        assert_eq!(a.monolithic_names(), b.monolithic_names());
        assert_eq!(a.animate_roots(), b.animate_roots());
        assert_eq!(a.inanimate_roots(), b.inanimate_roots());
    }
}
