//! Parse trees in decoupled TOP form and their skeletons.
//!
//! A [`ParseTree`] holds intent/slot nodes plus utterance leaves. Its
//! [`Skeleton`] keeps only the ontology nodes, stored as a pre-order arena so
//! that node indices double as stable positions for lattices and units.

mod nest;
mod top;

use std::fmt;

use crate::error::{Error, Result};

pub use nest::serialize_placeholder_nest;
pub(crate) use top::{lex, Token};
pub use top::{parse_top, serialize_top};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LabelKind {
    Intent,
    Slot,
}

impl LabelKind {
    pub fn prefix(self) -> &'static str {
        match self {
            LabelKind::Intent => "in:",
            LabelKind::Slot => "sl:",
        }
    }
}

/// An intent or slot name, serialized as `in:NAME` / `sl:NAME`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OntologyLabel {
    kind: LabelKind,
    name: String,
}

impl OntologyLabel {
    pub fn new(kind: LabelKind, name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty()
            || name
                .chars()
                .any(|c| c.is_whitespace() || c == '[' || c == ']')
        {
            return Err(Error::BadLabelPrefix(format!("{}{}", kind.prefix(), name)));
        }
        Ok(OntologyLabel { kind, name })
    }

    pub fn intent(name: impl Into<String>) -> Result<Self> {
        Self::new(LabelKind::Intent, name)
    }

    pub fn slot(name: impl Into<String>) -> Result<Self> {
        Self::new(LabelKind::Slot, name)
    }

    /// Parses `in:NAME` or `sl:NAME`. Upper-case prefixes as shipped in
    /// TOPv2 (`IN:`, `SL:`) are accepted and normalized to lower case.
    pub fn parse(text: &str) -> Result<Self> {
        let kind = match text.get(..3) {
            Some(p) if p.eq_ignore_ascii_case("in:") => LabelKind::Intent,
            Some(p) if p.eq_ignore_ascii_case("sl:") => LabelKind::Slot,
            _ => return Err(Error::BadLabelPrefix(text.to_string())),
        };
        Self::new(kind, &text[3..])
    }

    pub fn kind(&self) -> LabelKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_intent(&self) -> bool {
        self.kind == LabelKind::Intent
    }

    pub fn is_slot(&self) -> bool {
        self.kind == LabelKind::Slot
    }
}

impl fmt::Display for OntologyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.prefix(), self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OntologyNode {
    pub label: OntologyLabel,
    pub children: Vec<TreeNode>,
}

impl OntologyNode {
    pub fn new(label: OntologyLabel, children: Vec<TreeNode>) -> Self {
        OntologyNode { label, children }
    }

    pub fn leaf_node(label: OntologyLabel) -> Self {
        OntologyNode {
            label,
            children: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TreeNode {
    Ontology(OntologyNode),
    /// Utterance span: whitespace-normalized words, never empty.
    Leaf(String),
}

/// A validated parse tree: intent root, leaves only under slots, and no two
/// adjacent leaves (consecutive words under a slot form one leaf).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParseTree {
    root: OntologyNode,
}

impl ParseTree {
    pub fn new(root: OntologyNode) -> Result<Self> {
        if !root.label.is_intent() {
            return Err(Error::RootNotIntent(root.label.to_string()));
        }
        validate_node(&root)?;
        Ok(ParseTree { root })
    }

    pub fn root(&self) -> &OntologyNode {
        &self.root
    }

    /// Number of ontology nodes.
    pub fn ontology_count(&self) -> usize {
        fn count(node: &OntologyNode) -> usize {
            1 + node
                .children
                .iter()
                .map(|c| match c {
                    TreeNode::Ontology(n) => count(n),
                    TreeNode::Leaf(_) => 0,
                })
                .sum::<usize>()
        }
        count(&self.root)
    }

    /// Number of nodes including utterance leaves.
    pub fn node_count(&self) -> usize {
        fn count(node: &OntologyNode) -> usize {
            1 + node
                .children
                .iter()
                .map(|c| match c {
                    TreeNode::Ontology(n) => count(n),
                    TreeNode::Leaf(_) => 1,
                })
                .sum::<usize>()
        }
        count(&self.root)
    }
}

fn validate_node(node: &OntologyNode) -> Result<()> {
    let mut prev_leaf = false;
    for child in &node.children {
        match child {
            TreeNode::Leaf(text) => {
                if !node.label.is_slot() {
                    return Err(Error::TextUnderIntent(text.clone()));
                }
                if prev_leaf || !is_normalized_text(text) {
                    return Err(Error::MalformedLeaf(text.clone()));
                }
                prev_leaf = true;
            }
            TreeNode::Ontology(n) => {
                prev_leaf = false;
                validate_node(n)?;
            }
        }
    }
    Ok(())
}

fn is_normalized_text(text: &str) -> bool {
    !text.is_empty()
        && text
            .split(' ')
            .all(|w| !w.is_empty() && !w.chars().any(|c| c.is_whitespace() || c == '[' || c == ']'))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SkeletonNode {
    pub label: OntologyLabel,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Root has depth 1.
    pub depth: usize,
}

/// Ontology-only tree, nodes stored in pre-order (index 0 is the root).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Skeleton {
    nodes: Vec<SkeletonNode>,
}

impl Skeleton {
    pub fn from_root(root: &OntologyNode) -> Self {
        let mut nodes = Vec::new();
        push_ontology(root, None, 1, &mut nodes);
        Skeleton { nodes }
    }

    /// Builds a skeleton from a pre-order arena. Used by assembly; callers
    /// guarantee the arena is a well-formed pre-order layout.
    pub(crate) fn from_arena(nodes: Vec<SkeletonNode>) -> Self {
        debug_assert!(!nodes.is_empty() && nodes[0].parent.is_none());
        Skeleton { nodes }
    }

    /// Parses a logical form and keeps only its skeleton.
    pub fn parse(text: &str) -> Result<Self> {
        Ok(extract_skeleton(&parse_top(text)?))
    }

    pub fn nodes(&self) -> &[SkeletonNode] {
        &self.nodes
    }

    pub fn node(&self, index: usize) -> &SkeletonNode {
        &self.nodes[index]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn to_tree(&self) -> ParseTree {
        ParseTree {
            root: self.build_node(0),
        }
    }

    fn build_node(&self, index: usize) -> OntologyNode {
        let node = &self.nodes[index];
        OntologyNode {
            label: node.label.clone(),
            children: node
                .children
                .iter()
                .map(|&c| TreeNode::Ontology(self.build_node(c)))
                .collect(),
        }
    }

    /// Canonical TOP serialization, e.g. `[in:A [sl:B ] ]`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        self.write_node(0, &mut out);
        out
    }

    fn write_node(&self, index: usize, out: &mut String) {
        let node = &self.nodes[index];
        out.push('[');
        out.push_str(node.label.kind().prefix());
        out.push_str(node.label.name());
        for &c in &node.children {
            out.push(' ');
            self.write_node(c, out);
        }
        out.push_str(" ]");
    }
}

impl fmt::Display for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

fn push_ontology(
    node: &OntologyNode,
    parent: Option<usize>,
    depth: usize,
    nodes: &mut Vec<SkeletonNode>,
) -> usize {
    let index = nodes.len();
    nodes.push(SkeletonNode {
        label: node.label.clone(),
        parent,
        children: Vec::new(),
        depth,
    });
    for child in &node.children {
        if let TreeNode::Ontology(n) = child {
            let c = push_ontology(n, Some(index), depth + 1, nodes);
            nodes[index].children.push(c);
        }
    }
    index
}

/// Keeps all ontology nodes with their parent/child relations and order.
pub fn extract_skeleton(tree: &ParseTree) -> Skeleton {
    Skeleton::from_root(&tree.root)
}

/// An utterance leaf located by its owning slot's pre-order index in the
/// skeleton and its position among that slot's children in the full tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UtteranceLeaf {
    pub slot: usize,
    pub position: usize,
    pub text: String,
}

/// Lists utterance leaves in pre-order of their owning slot.
pub fn extract_leaves(tree: &ParseTree) -> Vec<UtteranceLeaf> {
    fn walk(node: &OntologyNode, next_index: &mut usize, out: &mut Vec<UtteranceLeaf>) {
        let own = *next_index;
        *next_index += 1;
        for (position, child) in node.children.iter().enumerate() {
            match child {
                TreeNode::Leaf(text) => out.push(UtteranceLeaf {
                    slot: own,
                    position,
                    text: text.clone(),
                }),
                TreeNode::Ontology(n) => walk(n, next_index, out),
            }
        }
    }
    let mut out = Vec::new();
    walk(&tree.root, &mut 0, &mut out);
    out
}

/// Inverse of (`extract_skeleton`, `extract_leaves`).
pub fn reconstruct(skeleton: &Skeleton, leaves: &[UtteranceLeaf]) -> Result<ParseTree> {
    let mut by_slot: Vec<Vec<&UtteranceLeaf>> = vec![Vec::new(); skeleton.node_count()];
    for leaf in leaves {
        let bucket = by_slot.get_mut(leaf.slot).ok_or(Error::InvalidPartition)?;
        bucket.push(leaf);
    }
    fn build(
        skeleton: &Skeleton,
        index: usize,
        by_slot: &[Vec<&UtteranceLeaf>],
    ) -> Result<OntologyNode> {
        let node = skeleton.node(index);
        let total = node.children.len() + by_slot[index].len();
        let mut slots: Vec<Option<TreeNode>> = vec![None; total];
        for leaf in &by_slot[index] {
            let cell = slots
                .get_mut(leaf.position)
                .ok_or(Error::InvalidPartition)?;
            if cell.is_some() {
                return Err(Error::InvalidPartition);
            }
            *cell = Some(TreeNode::Leaf(leaf.text.clone()));
        }
        let mut onto = node.children.iter();
        let mut children = Vec::with_capacity(total);
        for cell in slots {
            match cell {
                Some(leaf) => children.push(leaf),
                None => {
                    let c = onto.next().ok_or(Error::InvalidPartition)?;
                    children.push(TreeNode::Ontology(build(skeleton, *c, by_slot)?));
                }
            }
        }
        Ok(OntologyNode::new(node.label.clone(), children))
    }
    ParseTree::new(build(skeleton, 0, &by_slot)?)
}
