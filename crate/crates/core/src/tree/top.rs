use crate::error::{Error, Result};

use super::{OntologyLabel, OntologyNode, ParseTree, TreeNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Token<'a> {
    Open(&'a str),
    Close,
    Word(&'a str),
}

pub(crate) fn lex(text: &str) -> Vec<Token<'_>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    let is_delim = |b: u8| b.is_ascii_whitespace() || b == b'[' || b == b']';
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
        } else if b == b']' {
            tokens.push(Token::Close);
            i += 1;
        } else {
            let open = b == b'[';
            let start = if open { i + 1 } else { i };
            let mut end = start;
            while end < bytes.len() && !is_delim(bytes[end]) {
                end += 1;
            }
            let word = &text[start..end];
            tokens.push(if open {
                Token::Open(word)
            } else {
                Token::Word(word)
            });
            i = end;
        }
    }
    tokens
}

/// Parses a bracketed decoupled logical form such as
/// `[in:CREATE_REMINDER [sl:PERSON_REMINDED me ] ]`.
///
/// Consecutive words under one slot coalesce into a single utterance leaf.
pub fn parse_top(text: &str) -> Result<ParseTree> {
    let tokens = lex(text);
    if tokens.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut stack: Vec<(OntologyNode, Vec<&str>)> = Vec::new();
    let mut root: Option<OntologyNode> = None;

    fn flush(node: &mut OntologyNode, words: &mut Vec<&str>) -> Result<()> {
        if words.is_empty() {
            return Ok(());
        }
        let text = words.join(" ");
        words.clear();
        if !node.label.is_slot() {
            return Err(Error::TextUnderIntent(text));
        }
        node.children.push(TreeNode::Leaf(text));
        Ok(())
    }

    for (pos, token) in tokens.iter().enumerate() {
        if root.is_some() {
            return Err(Error::TrailingInput(pos));
        }
        match *token {
            Token::Open(label) => {
                if label.is_empty() {
                    return Err(Error::UnbalancedBrackets(pos));
                }
                let label = OntologyLabel::parse(label)?;
                if let Some((parent, words)) = stack.last_mut() {
                    flush(parent, words)?;
                } else if !label.is_intent() {
                    return Err(Error::RootNotIntent(label.to_string()));
                }
                stack.push((OntologyNode::leaf_node(label), Vec::new()));
            }
            Token::Word(word) => match stack.last_mut() {
                Some((node, words)) => {
                    if !node.label.is_slot() {
                        return Err(Error::TextUnderIntent(word.to_string()));
                    }
                    words.push(word);
                }
                None => return Err(Error::UnbalancedBrackets(pos)),
            },
            Token::Close => {
                let (mut node, mut words) = stack.pop().ok_or(Error::UnbalancedBrackets(pos))?;
                flush(&mut node, &mut words)?;
                match stack.last_mut() {
                    Some((parent, _)) => parent.children.push(TreeNode::Ontology(node)),
                    None => root = Some(node),
                }
            }
        }
    }
    match root {
        Some(root) => ParseTree::new(root),
        None => Err(Error::UnbalancedBrackets(tokens.len())),
    }
}

/// Canonical form: single spaces between tokens and a space before every `]`.
pub fn serialize_top(tree: &ParseTree) -> String {
    fn write(node: &OntologyNode, out: &mut String) {
        out.push('[');
        out.push_str(node.label.kind().prefix());
        out.push_str(node.label.name());
        for child in &node.children {
            out.push(' ');
            match child {
                TreeNode::Ontology(n) => write(n, out),
                TreeNode::Leaf(text) => out.push_str(text),
            }
        }
        out.push_str(" ]");
    }
    let mut out = String::new();
    write(tree.root(), &mut out);
    out
}
