//! Canonical text form of a [`MathAst`].
//!
//! Scripts are always braced, line breaks are written as ` \\ `, and an
//! argument-less control word that would otherwise run into a following
//! letter or brace is closed with `{}`.

use super::ast::{MathAst, Node};

pub fn serialize(ast: &MathAst) -> String {
    let mut out = String::new();
    write_sequence(&ast.root, &mut out);
    out
}

/// Writes a node that stands for an item sequence (the root, an argument,
/// a script): a group's children are written bare unless it has exactly
/// one child, in which case the braces are needed to keep it a group.
fn write_sequence(node: &Node, out: &mut String) {
    match node {
        Node::Group(children) if children.len() != 1 => write_items(children, out),
        other => write_items(std::slice::from_ref(other), out),
    }
}

fn write_items(items: &[Node], out: &mut String) {
    let mut open_word = false;
    for (i, item) in items.iter().enumerate() {
        let mut text = String::new();
        write_item(item, &mut text);
        if open_word && text.starts_with(|c: char| c.is_ascii_alphabetic() || c == '{') {
            out.push_str("{}");
        }
        if matches!(item, Node::LineBreak) {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&text);
            if i + 1 < items.len() {
                out.push(' ');
            }
        } else {
            out.push_str(&text);
        }
        open_word = ends_with_control_word(item);
    }
}

fn ends_with_control_word(node: &Node) -> bool {
    matches!(node, Node::Symbol { command, argument: None }
        if command[1..].starts_with(|c: char| c.is_ascii_alphabetic()))
}

fn write_item(node: &Node, out: &mut String) {
    match node {
        Node::Run(text) => out.push_str(text),
        Node::LineBreak => out.push_str("\\\\"),
        Node::Symbol { command, argument } => {
            out.push_str(command);
            if let Some(arg) = argument {
                out.push('{');
                write_sequence(arg, out);
                out.push('}');
            }
        }
        Node::Group(children) => {
            out.push('{');
            write_items(children, out);
            out.push('}');
        }
        Node::Script {
            base,
            superscript,
            subscript,
        } => {
            write_base(base, out);
            if let Some(sup) = superscript {
                out.push_str("^{");
                write_sequence(sup, out);
                out.push('}');
            }
            if let Some(sub) = subscript {
                out.push_str("_{");
                write_sequence(sub, out);
                out.push('}');
            }
        }
    }
}

fn write_base(base: &Node, out: &mut String) {
    match base {
        Node::Run(text) if text.chars().count() == 1 && text != " " => out.push_str(text),
        Node::Symbol { .. } | Node::Group(_) => write_item(base, out),
        other => {
            out.push('{');
            write_item(other, out);
            out.push('}');
        }
    }
}
