use crate::error::{Error, Result};
use crate::unit::{Partition, UnitChild, UnitNode, PLACEHOLDER};

use super::Skeleton;

/// Serializes a tokenized skeleton with each filler unit inlined at its
/// placeholder: `[in:A <ph>( [sl:B ] ) ]`.
pub fn serialize_placeholder_nest(skeleton: &Skeleton, partition: &Partition) -> Result<String> {
    if partition.is_empty() || partition.assemble().ok().as_ref() != Some(skeleton) {
        return Err(Error::InvalidPartition);
    }
    let units = partition.units();
    let mut fillers: Vec<Vec<usize>> = units
        .iter()
        .map(|u| vec![usize::MAX; u.placeholder_count()])
        .collect();
    for (k, att) in partition.attachments().iter().enumerate() {
        fillers[att.host][att.placeholder] = k + 1;
    }

    fn write(
        node: &UnitNode,
        unit: usize,
        next_ph: &mut usize,
        ctx: &(&[crate::unit::TreePieceUnit], &[Vec<usize>]),
        out: &mut String,
    ) {
        out.push('[');
        out.push_str(node.label.kind().prefix());
        out.push_str(node.label.name());
        for child in &node.children {
            out.push(' ');
            match child {
                UnitChild::Node(n) => write(n, unit, next_ph, ctx, out),
                UnitChild::Placeholder => {
                    let filler = ctx.1[unit][*next_ph];
                    *next_ph += 1;
                    out.push_str(PLACEHOLDER);
                    out.push_str("( ");
                    write(ctx.0[filler].root(), filler, &mut 0, ctx, out);
                    out.push_str(" )");
                }
            }
        }
        out.push_str(" ]");
    }

    let mut out = String::new();
    write(units[0].root(), 0, &mut 0, &(units, &fillers), &mut out);
    Ok(out)
}
