//! TreePiece units: connected subtree shapes that may carry `<ph>`
//! placeholders where a child was cut off, plus the gluing rule that puts
//! an ordered list of units back together.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::tree::{lex, OntologyLabel, Skeleton, SkeletonNode, Token};

pub const PLACEHOLDER: &str = "<ph>";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum UnitChild {
    Node(UnitNode),
    Placeholder,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnitNode {
    pub label: OntologyLabel,
    pub children: Vec<UnitChild>,
}

impl UnitNode {
    pub fn new(label: OntologyLabel, children: Vec<UnitChild>) -> Self {
        UnitNode { label, children }
    }

    pub fn single(label: OntologyLabel) -> Self {
        UnitNode {
            label,
            children: Vec::new(),
        }
    }
}

/// A subtree unit. Equality, hashing and ordering go through the canonical
/// string, e.g. `[in:A [sl:B ] <ph> ]`.
#[derive(Debug, Clone)]
pub struct TreePieceUnit {
    root: UnitNode,
    canonical: String,
}

impl PartialEq for TreePieceUnit {
    fn eq(&self, other: &Self) -> bool {
        self.canonical == other.canonical
    }
}

impl Eq for TreePieceUnit {}

impl Hash for TreePieceUnit {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical.hash(state);
    }
}

impl PartialOrd for TreePieceUnit {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TreePieceUnit {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical.cmp(&other.canonical)
    }
}

impl fmt::Display for TreePieceUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical)
    }
}

fn write_unit_node(node: &UnitNode, out: &mut String) {
    out.push('[');
    out.push_str(node.label.kind().prefix());
    out.push_str(node.label.name());
    for child in &node.children {
        out.push(' ');
        match child {
            UnitChild::Node(n) => write_unit_node(n, out),
            UnitChild::Placeholder => out.push_str(PLACEHOLDER),
        }
    }
    out.push_str(" ]");
}

impl TreePieceUnit {
    pub fn new(root: UnitNode) -> Self {
        let mut canonical = String::new();
        write_unit_node(&root, &mut canonical);
        TreePieceUnit { root, canonical }
    }

    pub fn singleton(label: OntologyLabel) -> Self {
        Self::new(UnitNode::single(label))
    }

    /// Parses a canonical unit string. Whitespace is normalized, so any
    /// spacing of a valid unit is accepted.
    pub fn parse(text: &str) -> Result<Self> {
        let tokens = lex(text);
        if tokens.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut stack: Vec<UnitNode> = Vec::new();
        let mut root = None;
        for (pos, token) in tokens.iter().enumerate() {
            if root.is_some() {
                return Err(Error::TrailingInput(pos));
            }
            match *token {
                Token::Open(label) => stack.push(UnitNode::single(OntologyLabel::parse(label)?)),
                Token::Close => {
                    let node = stack.pop().ok_or(Error::UnbalancedBrackets(pos))?;
                    match stack.last_mut() {
                        Some(parent) => parent.children.push(UnitChild::Node(node)),
                        None => root = Some(node),
                    }
                }
                Token::Word(PLACEHOLDER) => match stack.last_mut() {
                    Some(parent) => parent.children.push(UnitChild::Placeholder),
                    None => return Err(Error::UnexpectedPlaceholder(text.to_string())),
                },
                Token::Word(word) => {
                    return Err(Error::UnexpectedPlaceholder(format!(
                        "unexpected token `{word}` in unit"
                    )))
                }
            }
        }
        root.map(Self::new)
            .ok_or(Error::UnbalancedBrackets(tokens.len()))
    }

    pub fn root(&self) -> &UnitNode {
        &self.root
    }

    pub fn canonical(&self) -> &str {
        &self.canonical
    }

    pub fn root_label(&self) -> &OntologyLabel {
        &self.root.label
    }

    /// Number of ontology nodes.
    pub fn node_count(&self) -> usize {
        fn count(n: &UnitNode) -> usize {
            1 + n
                .children
                .iter()
                .map(|c| match c {
                    UnitChild::Node(n) => count(n),
                    UnitChild::Placeholder => 0,
                })
                .sum::<usize>()
        }
        count(&self.root)
    }

    pub fn placeholder_count(&self) -> usize {
        fn count(n: &UnitNode) -> usize {
            n.children
                .iter()
                .map(|c| match c {
                    UnitChild::Node(n) => count(n),
                    UnitChild::Placeholder => 1,
                })
                .sum()
        }
        count(&self.root)
    }

    pub fn is_bare(&self) -> bool {
        self.placeholder_count() == 0
    }

    /// Same shape with every placeholder removed.
    pub fn bare(&self) -> TreePieceUnit {
        fn strip(n: &UnitNode) -> UnitNode {
            UnitNode {
                label: n.label.clone(),
                children: n
                    .children
                    .iter()
                    .filter_map(|c| match c {
                        UnitChild::Node(n) => Some(UnitChild::Node(strip(n))),
                        UnitChild::Placeholder => None,
                    })
                    .collect(),
            }
        }
        if self.is_bare() {
            return self.clone();
        }
        Self::new(strip(&self.root))
    }
}

pub fn canonicalize(unit: &TreePieceUnit) -> String {
    unit.canonical.clone()
}

/// Where `merge_pair` grafts the lower unit: `node` is a pre-order index into
/// the upper unit, `index` the child slot the lower root is inserted at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttachPosition {
    pub node: usize,
    pub index: usize,
}

/// Grafts `lower` under `upper` and returns the bare merged shape.
pub fn merge_pair(
    upper: &TreePieceUnit,
    lower: &TreePieceUnit,
    at: AttachPosition,
) -> Result<TreePieceUnit> {
    if !upper.is_bare() || !lower.is_bare() {
        return Err(Error::UnexpectedPlaceholder(
            "merge_pair expects bare units".into(),
        ));
    }
    fn graft(
        node: &mut UnitNode,
        counter: &mut usize,
        at: AttachPosition,
        lower: &UnitNode,
    ) -> bool {
        if *counter == at.node {
            if at.index > node.children.len() {
                return false;
            }
            node.children
                .insert(at.index, UnitChild::Node(lower.clone()));
            *counter = usize::MAX;
            return true;
        }
        *counter += 1;
        for child in node.children.iter_mut() {
            if let UnitChild::Node(n) = child {
                if graft(n, counter, at, lower) {
                    return true;
                }
                if *counter == usize::MAX {
                    return false;
                }
            }
        }
        false
    }
    let mut root = upper.root.clone();
    let mut counter = 0;
    if !graft(&mut root, &mut counter, at, &lower.root) {
        return Err(Error::InvalidAttachPosition {
            node: at.node,
            index: at.index,
        });
    }
    Ok(TreePieceUnit::new(root))
}

/// Root of `component` if it is non-empty and connected in `skeleton`.
pub(crate) fn component_root(skeleton: &Skeleton, component: &[usize]) -> Result<usize> {
    let n = skeleton.node_count();
    let mut member = vec![false; n];
    for &i in component {
        if i >= n || member[i] {
            return Err(Error::DisconnectedComponent);
        }
        member[i] = true;
    }
    let mut roots = component
        .iter()
        .copied()
        .filter(|&i| match skeleton.node(i).parent {
            Some(p) => !member[p],
            None => true,
        });
    match (roots.next(), roots.next()) {
        (Some(root), None) => Ok(root),
        _ => Err(Error::DisconnectedComponent),
    }
}

fn build_component(
    skeleton: &Skeleton,
    index: usize,
    member: &dyn Fn(usize) -> bool,
    decorated: bool,
) -> UnitNode {
    let node = skeleton.node(index);
    let children = node
        .children
        .iter()
        .filter_map(|&c| {
            if member(c) {
                Some(UnitChild::Node(build_component(
                    skeleton, c, member, decorated,
                )))
            } else if decorated {
                Some(UnitChild::Placeholder)
            } else {
                None
            }
        })
        .collect();
    UnitNode::new(node.label.clone(), children)
}

/// The component's shape with a placeholder at every child position whose
/// skeleton child lies outside the component.
pub fn decorate(skeleton: &Skeleton, component: &[usize]) -> Result<TreePieceUnit> {
    let root = component_root(skeleton, component)?;
    let member = |i: usize| component.contains(&i);
    Ok(TreePieceUnit::new(build_component(
        skeleton, root, &member, true,
    )))
}

/// The component's induced shape without placeholders.
pub fn bare_shape(skeleton: &Skeleton, component: &[usize]) -> Result<TreePieceUnit> {
    let root = component_root(skeleton, component)?;
    let member = |i: usize| component.contains(&i);
    Ok(TreePieceUnit::new(build_component(
        skeleton, root, &member, false,
    )))
}

/// Writes the canonical string of the connected node set rooted at `root`
/// straight from the skeleton, without building a unit tree.
pub(crate) fn write_component_canonical(
    skeleton: &Skeleton,
    root: usize,
    member: &dyn Fn(usize) -> bool,
    decorated: bool,
    out: &mut String,
) {
    let node = skeleton.node(root);
    out.push('[');
    out.push_str(node.label.kind().prefix());
    out.push_str(node.label.name());
    for &c in &node.children {
        if member(c) {
            out.push(' ');
            write_component_canonical(skeleton, c, member, decorated, out);
        } else if decorated {
            out.push(' ');
            out.push_str(PLACEHOLDER);
        }
    }
    out.push_str(" ]");
}

/// Which placeholder of which earlier unit a unit was glued into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Attachment {
    pub host: usize,
    /// Pre-order ordinal among the host's placeholders.
    pub placeholder: usize,
}

/// Units of one skeleton in assembly order. `attachments[k]` belongs to
/// `units[k + 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    units: Vec<TreePieceUnit>,
    attachments: Vec<Attachment>,
}

impl Partition {
    /// Validates that the units glue together and records the attachments.
    pub fn new(units: Vec<TreePieceUnit>) -> Result<Self> {
        let (_, attachments) = assemble_detailed(&units)?;
        Ok(Partition { units, attachments })
    }

    /// Builds the partition of `skeleton` given by disjoint connected
    /// components covering every node.
    pub fn from_components(skeleton: &Skeleton, components: &[Vec<usize>]) -> Result<Self> {
        let n = skeleton.node_count();
        let mut owner = vec![usize::MAX; n];
        let mut rooted: Vec<(usize, usize)> = Vec::with_capacity(components.len());
        for (k, comp) in components.iter().enumerate() {
            let root = component_root(skeleton, comp)?;
            for &i in comp {
                if owner[i] != usize::MAX {
                    return Err(Error::InvalidPartition);
                }
                owner[i] = k;
            }
            rooted.push((root, k));
        }
        if owner.contains(&usize::MAX) {
            return Err(Error::InvalidPartition);
        }
        rooted.sort_unstable();
        let mut order = vec![0usize; components.len()];
        for (pos, &(_, k)) in rooted.iter().enumerate() {
            order[k] = pos;
        }
        let mut units = Vec::with_capacity(components.len());
        let mut attachments = Vec::with_capacity(components.len().saturating_sub(1));
        for &(root, k) in &rooted {
            units.push(decorate(skeleton, &components[k])?);
            if let Some(parent) = skeleton.node(root).parent {
                let host_k = owner[parent];
                let host_root = rooted[order[host_k]].0;
                let member = |i: usize| owner[i] == host_k;
                let ordinal = placeholder_positions(skeleton, host_root, &member)
                    .iter()
                    .position(|&c| c == root)
                    .ok_or(Error::InvalidPartition)?;
                attachments.push(Attachment {
                    host: order[host_k],
                    placeholder: ordinal,
                });
            }
        }
        Ok(Partition { units, attachments })
    }

    pub fn units(&self) -> &[TreePieceUnit] {
        &self.units
    }

    pub fn attachments(&self) -> &[Attachment] {
        &self.attachments
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// n(π, τ): occurrences of `unit` in this partition.
    pub fn count(&self, unit: &TreePieceUnit) -> usize {
        self.units.iter().filter(|u| *u == unit).count()
    }

    pub fn assemble(&self) -> Result<Skeleton> {
        assemble(&self.units)
    }

    /// Units joined by tabs, the line format of the tokenize command.
    pub fn to_line(&self) -> String {
        let mut out = String::new();
        for (i, u) in self.units.iter().enumerate() {
            if i > 0 {
                out.push('\t');
            }
            out.push_str(u.canonical());
        }
        out
    }

    pub fn into_units(self) -> Vec<TreePieceUnit> {
        self.units
    }
}

/// Skeleton children of component nodes that fall outside the component, in
/// pre-order. These are exactly the placeholder positions of the decorated
/// unit.
fn placeholder_positions(
    skeleton: &Skeleton,
    root: usize,
    member: &dyn Fn(usize) -> bool,
) -> Vec<usize> {
    fn walk(skeleton: &Skeleton, i: usize, member: &dyn Fn(usize) -> bool, out: &mut Vec<usize>) {
        for &c in &skeleton.node(i).children {
            if member(c) {
                walk(skeleton, c, member, out);
            } else {
                out.push(c);
            }
        }
    }
    let mut out = Vec::new();
    walk(skeleton, root, member, &mut out);
    out
}

/// Glues units left to right: each unit after the first fills the earliest
/// open placeholder in pre-order of the tree built so far.
pub fn assemble(units: &[TreePieceUnit]) -> Result<Skeleton> {
    assemble_detailed(units).map(|(s, _)| s)
}

struct AssemblyNode {
    label: OntologyLabel,
    children: Vec<Option<usize>>,
}

pub(crate) fn assemble_detailed(units: &[TreePieceUnit]) -> Result<(Skeleton, Vec<Attachment>)> {
    let first = units.first().ok_or(Error::EmptyInput)?;
    if !first.root_label().is_intent() {
        return Err(Error::RootNotIntent(first.root_label().to_string()));
    }
    let mut arena: Vec<AssemblyNode> = Vec::new();
    // Open placeholders, earliest in pre-order on top:
    // (arena node, child slot, host unit, ordinal in host).
    let mut open: Vec<(usize, usize, usize, usize)> = Vec::new();
    let mut attachments = Vec::with_capacity(units.len().saturating_sub(1));

    fn insert(
        node: &UnitNode,
        arena: &mut Vec<AssemblyNode>,
        unit_index: usize,
        found: &mut Vec<(usize, usize, usize, usize)>,
    ) -> usize {
        let id = arena.len();
        arena.push(AssemblyNode {
            label: node.label.clone(),
            children: Vec::with_capacity(node.children.len()),
        });
        for (slot, child) in node.children.iter().enumerate() {
            match child {
                UnitChild::Node(n) => {
                    let c = insert(n, arena, unit_index, found);
                    arena[id].children.push(Some(c));
                }
                UnitChild::Placeholder => {
                    arena[id].children.push(None);
                    let ordinal = found.len();
                    found.push((id, slot, unit_index, ordinal));
                }
            }
        }
        id
    }

    for (k, unit) in units.iter().enumerate() {
        let target = if k == 0 {
            None
        } else {
            Some(open.pop().ok_or(Error::NoOpenPlaceholder(k))?)
        };
        let mut found = Vec::new();
        let id = insert(unit.root(), &mut arena, k, &mut found);
        if let Some((node, slot, host, ordinal)) = target {
            arena[node].children[slot] = Some(id);
            attachments.push(Attachment {
                host,
                placeholder: ordinal,
            });
        }
        open.extend(found.into_iter().rev());
    }
    if !open.is_empty() {
        return Err(Error::UnfilledPlaceholders(open.len()));
    }

    let mut nodes: Vec<SkeletonNode> = Vec::with_capacity(arena.len());
    fn flatten(
        arena: &[AssemblyNode],
        id: usize,
        parent: Option<usize>,
        depth: usize,
        out: &mut Vec<SkeletonNode>,
    ) -> usize {
        let index = out.len();
        out.push(SkeletonNode {
            label: arena[id].label.clone(),
            parent,
            children: Vec::with_capacity(arena[id].children.len()),
            depth,
        });
        for c in arena[id].children.iter().flatten() {
            let ci = flatten(arena, *c, Some(index), depth + 1, out);
            out[index].children.push(ci);
        }
        index
    }
    flatten(&arena, 0, None, 1, &mut nodes);
    Ok((Skeleton::from_arena(nodes), attachments))
}

/// A candidate merge during vocabulary generation, keyed by its merged shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacentPair {
    pub merged: TreePieceUnit,
    pub frequency: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(s: &str) -> TreePieceUnit {
        TreePieceUnit::parse(s).unwrap()
    }

    fn skel(s: &str) -> Skeleton {
        Skeleton::parse(s).unwrap()
    }

    #[test]
    fn canonical_forms() {
        let a = OntologyLabel::intent("A").unwrap();
        let b = OntologyLabel::slot("B").unwrap();
        let two_ph = TreePieceUnit::new(UnitNode::new(
            a.clone(),
            vec![UnitChild::Placeholder, UnitChild::Placeholder],
        ));
        assert_eq!(canonicalize(&two_ph), "[in:A <ph> <ph> ]");
        let ab = TreePieceUnit::new(UnitNode::new(a, vec![UnitChild::Node(UnitNode::single(b))]));
        assert_eq!(ab.canonical(), "[in:A [sl:B ] ]");
        assert_ne!(
            unit("[in:A [sl:B ] [sl:C ] ]"),
            unit("[in:A [sl:C ] [sl:B ] ]")
        );
    }

    #[test]
    fn parse_accepts_loose_spacing() {
        assert_eq!(
            unit("[in:A [sl:B] <ph>]").canonical(),
            "[in:A [sl:B ] <ph> ]"
        );
        assert!(TreePieceUnit::parse("").is_err());
        assert!(TreePieceUnit::parse("<ph>").is_err());
        assert!(TreePieceUnit::parse("[in:A foo ]").is_err());
        assert!(TreePieceUnit::parse("[in:A ] [in:B ]").is_err());
        assert!(TreePieceUnit::parse("[in:A [sl:B ]").is_err());
    }

    #[test]
    fn merge_examples() {
        let at = |node, index| AttachPosition { node, index };
        assert_eq!(
            merge_pair(&unit("[in:A ]"), &unit("[sl:B ]"), at(0, 0))
                .unwrap()
                .canonical(),
            "[in:A [sl:B ] ]"
        );
        assert_eq!(
            merge_pair(&unit("[in:A [sl:B ] ]"), &unit("[sl:C ]"), at(0, 1))
                .unwrap()
                .canonical(),
            "[in:A [sl:B ] [sl:C ] ]"
        );
        assert_eq!(
            merge_pair(&unit("[in:A [sl:B ] ]"), &unit("[sl:C ]"), at(0, 2)),
            Err(Error::InvalidAttachPosition { node: 0, index: 2 })
        );
        assert_eq!(
            merge_pair(&unit("[in:A [sl:B ] ]"), &unit("[sl:C ]"), at(5, 0)),
            Err(Error::InvalidAttachPosition { node: 5, index: 0 })
        );
        let merged = merge_pair(&unit("[in:A [sl:B ] ]"), &unit("[in:C ]"), at(1, 0)).unwrap();
        assert_eq!(merged.canonical(), "[in:A [sl:B [in:C ] ] ]");
        assert_eq!(merged.node_count(), 3);
    }

    #[test]
    fn decorate_examples() {
        let s = skel("[in:A [sl:B ] [sl:C ] ]");
        assert_eq!(decorate(&s, &[0]).unwrap().canonical(), "[in:A <ph> <ph> ]");
        assert_eq!(
            decorate(&s, &[0, 1]).unwrap().canonical(),
            "[in:A [sl:B ] <ph> ]"
        );
        let whole = decorate(&s, &[0, 1, 2]).unwrap();
        assert!(whole.is_bare());
        assert_eq!(whole.canonical(), s.serialize());
        assert_eq!(decorate(&s, &[1, 2]), Err(Error::DisconnectedComponent));
        assert_eq!(decorate(&s, &[]), Err(Error::DisconnectedComponent));
        assert_eq!(
            bare_shape(&s, &[0, 2]).unwrap().canonical(),
            "[in:A [sl:C ] ]"
        );
    }

    #[test]
    fn assemble_examples() {
        let units = vec![unit("[in:A <ph> <ph> ]"), unit("[sl:B ]"), unit("[sl:C ]")];
        assert_eq!(
            assemble(&units).unwrap().serialize(),
            "[in:A [sl:B ] [sl:C ] ]"
        );
        assert_eq!(
            assemble(&[unit("[in:A [sl:B ] ]")]).unwrap().serialize(),
            "[in:A [sl:B ] ]"
        );
        assert_eq!(
            assemble(&[unit("[in:A <ph> ]")]),
            Err(Error::UnfilledPlaceholders(1))
        );
        assert_eq!(
            assemble(&[unit("[in:A ]"), unit("[sl:B ]")]),
            Err(Error::NoOpenPlaceholder(1))
        );
        assert_eq!(assemble(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn assemble_fills_in_preorder() {
        let units = vec![
            unit("[in:A <ph> <ph> ]"),
            unit("[sl:B <ph> ]"),
            unit("[in:D ]"),
            unit("[sl:C ]"),
        ];
        let (s, att) = assemble_detailed(&units).unwrap();
        assert_eq!(s.serialize(), "[in:A [sl:B [in:D ] ] [sl:C ] ]");
        assert_eq!(
            att,
            vec![
                Attachment {
                    host: 0,
                    placeholder: 0
                },
                Attachment {
                    host: 1,
                    placeholder: 0
                },
                Attachment {
                    host: 0,
                    placeholder: 1
                },
            ]
        );
    }

    #[test]
    fn partition_from_components_matches_assembly() {
        // pre-order: 0 = A, 1 = B, 2 = D, 3 = C
        let s = skel("[in:A [sl:B [in:D ] ] [sl:C ] ]");
        let p = Partition::from_components(&s, &[vec![1, 2], vec![3, 0]]).unwrap();
        assert_eq!(p.to_line(), "[in:A <ph> [sl:C ] ]\t[sl:B [in:D ] ]");
        assert_eq!(
            p.attachments(),
            &[Attachment {
                host: 0,
                placeholder: 0
            }]
        );
        assert_eq!(p.assemble().unwrap(), s);
        let again = Partition::new(p.units().to_vec()).unwrap();
        assert_eq!(again.attachments(), p.attachments());

        let fine = Partition::from_components(&s, &[vec![0], vec![1], vec![2], vec![3]]).unwrap();
        assert_eq!(fine.len(), 4);
        assert_eq!(
            fine.attachments(),
            &[
                Attachment {
                    host: 0,
                    placeholder: 0
                },
                Attachment {
                    host: 1,
                    placeholder: 0
                },
                Attachment {
                    host: 0,
                    placeholder: 1
                },
            ]
        );
        assert!(Partition::from_components(&s, &[vec![0, 1, 2]]).is_err());
        assert!(Partition::from_components(&s, &[vec![0, 1, 2, 3], vec![3]]).is_err());
        assert!(Partition::from_components(&s, &[vec![0, 2], vec![1, 3]]).is_err());
    }
}
