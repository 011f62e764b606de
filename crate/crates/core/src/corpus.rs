use crate::error::{Error, Result};
use crate::tree::{extract_skeleton, ParseTree, Skeleton};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusRecord {
    pub domain: Option<String>,
    pub utterance: String,
    pub tree: ParseTree,
}

/// Parsed records plus one derived skeleton per record, in record order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    records: Vec<CorpusRecord>,
    skeletons: Vec<Skeleton>,
}

impl Corpus {
    pub fn new(records: Vec<CorpusRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let skeletons = records.iter().map(|r| extract_skeleton(&r.tree)).collect();
        Ok(Corpus { records, skeletons })
    }

    /// Corpus of bare skeletons with empty utterances.
    pub fn from_skeletons(skeletons: Vec<Skeleton>) -> Result<Self> {
        Self::new(
            skeletons
                .into_iter()
                .map(|s| CorpusRecord {
                    domain: None,
                    utterance: String::new(),
                    tree: s.to_tree(),
                })
                .collect(),
        )
    }

    /// Parses each logical form; convenient for fixtures.
    pub fn from_logical_forms<'a>(forms: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let skeletons = forms
            .into_iter()
            .map(Skeleton::parse)
            .collect::<Result<Vec<_>>>()?;
        Self::from_skeletons(skeletons)
    }

    pub fn records(&self) -> &[CorpusRecord] {
        &self.records
    }

    pub fn skeletons(&self) -> &[Skeleton] {
        &self.skeletons
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}
