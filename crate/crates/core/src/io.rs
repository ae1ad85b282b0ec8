//! JSON file formats for representations, pants decompositions, mapping
//! classes, marked structures and convergence manifests.
//!
//! Words are written as space separated generator names with `'` marking
//! an inverse, for example `"A B A' B'"`. Paths inside marked-structure
//! files and manifests are resolved relative to the file that names them.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuchsian::{CuffData, GroupRepresentation, Word};
use crate::marked_moduli::MarkedStructure;
use crate::mcg_action::MappingClass;
use crate::moebius::MoebiusTransform;
use crate::pants_builder::PantsDecomposition;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuffRecord {
    pub word: String,
    pub length: f64,
    pub left: Vec<bool>,
    pub right: Vec<bool>,
}

/// On-disk form of a [`GroupRepresentation`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationRecord {
    pub generators: Vec<String>,
    pub matrices: Vec<[f64; 4]>,
    #[serde(default)]
    pub relators: Vec<String>,
    #[serde(default)]
    pub peripheral: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cuffs: Vec<CuffRecord>,
}

fn parse_word(text: &str, names: &[String]) -> Result<Word> {
    match text.trim() {
        "" | "1" => Ok(Word::identity()),
        t => Word::parse(t, names),
    }
}

impl RepresentationRecord {
    pub fn from_representation(rep: &GroupRepresentation) -> Self {
        let show = |w: &Word| rep.show(w);
        RepresentationRecord {
            generators: rep.names().to_vec(),
            matrices: rep.images().iter().map(|m| m.entries()).collect(),
            relators: rep.relators().iter().map(show).collect(),
            peripheral: rep.peripheral_words().iter().map(show).collect(),
            cuffs: rep
                .cuffs()
                .iter()
                .map(|c| CuffRecord {
                    word: show(&c.word),
                    length: c.length,
                    left: c.left.clone(),
                    right: c.right.clone(),
                })
                .collect(),
        }
    }

    pub fn to_representation(&self) -> Result<GroupRepresentation> {
        let names = &self.generators;
        let images = self
            .matrices
            .iter()
            .map(|&m| MoebiusTransform::try_from(m))
            .collect::<Result<Vec<_>>>()?;
        let words = |list: &[String]| list.iter().map(|w| parse_word(w, names)).collect::<Result<Vec<_>>>();
        let rep = GroupRepresentation::new(names.clone(), images, words(&self.relators)?, words(&self.peripheral)?)?;
        if self.cuffs.is_empty() {
            return Ok(rep);
        }
        let cuffs = self
            .cuffs
            .iter()
            .map(|c| {
                Ok(CuffData {
                    word: parse_word(&c.word, names)?,
                    length: c.length,
                    left: c.left.clone(),
                    right: c.right.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rep.with_cuffs(cuffs)
    }
}

pub fn representation_from_json(text: &str) -> Result<GroupRepresentation> {
    serde_json::from_str::<RepresentationRecord>(text)?.to_representation()
}

pub fn representation_to_json(rep: &GroupRepresentation) -> String {
    serde_json::to_string_pretty(&RepresentationRecord::from_representation(rep)).expect("records serialize")
}

pub fn read_representation(path: &Path) -> Result<GroupRepresentation> {
    representation_from_json(&read(path)?)
}

pub fn write_representation(path: &Path, rep: &GroupRepresentation) -> Result<()> {
    Ok(fs::write(path, representation_to_json(rep) + "\n")?)
}

pub fn pants_from_json(text: &str) -> Result<PantsDecomposition> {
    let pd: PantsDecomposition = serde_json::from_str(text)?;
    pd.validate()?;
    Ok(pd)
}

pub fn read_pants(path: &Path) -> Result<PantsDecomposition> {
    pants_from_json(&read(path)?)
}

/// On-disk form of a [`MappingClass`]: generator name to image word.
/// Generators missing from a table are fixed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MappingClassRecord {
    pub images: BTreeMap<String, String>,
    pub inverse_images: BTreeMap<String, String>,
}

impl MappingClassRecord {
    pub fn from_mapping_class(mc: &MappingClass, names: &[String]) -> Self {
        let table = |words: &[Word]| {
            names
                .iter()
                .zip(words)
                .map(|(n, w)| (n.clone(), w.display(names).to_string()))
                .collect()
        };
        MappingClassRecord {
            images: table(mc.images()),
            inverse_images: table(mc.inverse_images()),
        }
    }

    /// Resolves the tables against generator names. Malformed entries are
    /// reported as invalid automorphisms.
    pub fn to_mapping_class(&self, names: &[String]) -> Result<MappingClass> {
        let resolve = |table: &BTreeMap<String, String>| -> Result<Vec<Word>> {
            if let Some(unknown) = table.keys().find(|k| !names.contains(k)) {
                return Err(Error::InvalidAutomorphism(format!("unknown generator `{unknown}`")));
            }
            names
                .iter()
                .enumerate()
                .map(|(i, n)| match table.get(n) {
                    Some(text) => parse_word(text, names)
                        .map_err(|e| Error::InvalidAutomorphism(format!("image of `{n}`: {e}"))),
                    None => Ok(Word::generator(i)),
                })
                .collect()
        };
        MappingClass::new(resolve(&self.images)?, resolve(&self.inverse_images)?)
    }
}

pub fn mapping_class_from_json(text: &str, names: &[String]) -> Result<MappingClass> {
    serde_json::from_str::<MappingClassRecord>(text)?.to_mapping_class(names)
}

pub fn read_mapping_class(path: &Path, names: &[String]) -> Result<MappingClass> {
    mapping_class_from_json(&read(path)?, names)
}

/// A marked structure stored as a pair of representation file paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkedRecord {
    pub reference: PathBuf,
    pub target: PathBuf,
}

pub fn read_marked(path: &Path) -> Result<MarkedStructure> {
    let record: MarkedRecord = serde_json::from_str(&read(path)?)?;
    let dir = parent(path);
    MarkedStructure::new(
        read_representation(&dir.join(&record.reference))?,
        read_representation(&dir.join(&record.target))?,
    )
}

/// A sequence of targets sharing one reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestRecord {
    pub reference: PathBuf,
    pub targets: Vec<PathBuf>,
}

/// Reads a manifest into its reference and the marked structures it lists.
pub fn read_manifest(path: &Path) -> Result<(GroupRepresentation, Vec<MarkedStructure>)> {
    let record: ManifestRecord = serde_json::from_str(&read(path)?)?;
    if record.targets.len() < 2 {
        return Err(Error::Input(format!(
            "manifest lists {} structures, at least 2 are needed",
            record.targets.len()
        )));
    }
    let dir = parent(path);
    let reference = read_representation(&dir.join(&record.reference))?;
    let sequence = record
        .targets
        .iter()
        .map(|t| MarkedStructure::new(reference.clone(), read_representation(&dir.join(t))?))
        .collect::<Result<_>>()?;
    Ok((reference, sequence))
}

fn parent(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new("."))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}
