use std::fmt::{self, Write};

/// A node of the math-subset parse tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    /// Letters, digits, punctuation and spaces, verbatim.
    Run(String),
    /// A `\command`, with an argument only for argument-taking commands.
    Symbol {
        command: String,
        argument: Option<Box<Node>>,
    },
    Script {
        base: Box<Node>,
        superscript: Option<Box<Node>>,
        subscript: Option<Box<Node>>,
    },
    Group(Vec<Node>),
    LineBreak,
}

impl Node {
    pub fn run(text: impl Into<String>) -> Self {
        Node::Run(text.into())
    }

    pub fn symbol(command: impl Into<String>) -> Self {
        Node::Symbol {
            command: command.into(),
            argument: None,
        }
    }

    pub fn symbol_with(command: impl Into<String>, argument: Node) -> Self {
        Node::Symbol {
            command: command.into(),
            argument: Some(Box::new(argument)),
        }
    }

    pub fn script(base: Node, superscript: Option<Node>, subscript: Option<Node>) -> Self {
        Node::Script {
            base: Box::new(base),
            superscript: superscript.map(Box::new),
            subscript: subscript.map(Box::new),
        }
    }

    /// The node a sequence of items stands for: the item itself when there
    /// is exactly one, otherwise a group.
    pub fn from_items(mut items: Vec<Node>) -> Self {
        if items.len() == 1 {
            items.pop().expect("one item")
        } else {
            Node::Group(items)
        }
    }

    pub fn is_empty_group(&self) -> bool {
        matches!(self, Node::Group(c) if c.is_empty())
    }

    /// Calls `f` on this node and every descendant, pre-order.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Node)) {
        f(self);
        match self {
            Node::Run(_) | Node::LineBreak => {}
            Node::Symbol { argument, .. } => {
                if let Some(a) = argument {
                    a.walk(f);
                }
            }
            Node::Script {
                base,
                superscript,
                subscript,
            } => {
                base.walk(f);
                for s in [superscript, subscript].into_iter().flatten() {
                    s.walk(f);
                }
            }
            Node::Group(children) => children.iter().for_each(|c| c.walk(f)),
        }
    }
}

/// Parse tree of one label.
#[derive(Debug, Clone, PartialEq)]
pub struct MathAst {
    pub root: Node,
}

impl MathAst {
    pub fn new(root: Node) -> Self {
        Self { root }
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_empty_group()
    }

    /// Indented tree rendering, one node per line.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        pretty_node(&self.root, 0, "", &mut out);
        out
    }
}

fn pretty_node(node: &Node, depth: usize, label: &str, out: &mut String) {
    let pad = "  ".repeat(depth);
    let _ = write!(out, "{pad}{label}");
    match node {
        Node::Run(text) => {
            let _ = writeln!(out, "Run({text:?})");
        }
        Node::LineBreak => {
            let _ = writeln!(out, "LineBreak");
        }
        Node::Symbol { command, argument } => {
            let _ = writeln!(out, "Symbol({command})");
            if let Some(arg) = argument {
                pretty_node(arg, depth + 1, "arg: ", out);
            }
        }
        Node::Script {
            base,
            superscript,
            subscript,
        } => {
            let _ = writeln!(out, "Script");
            pretty_node(base, depth + 1, "base: ", out);
            if let Some(s) = superscript {
                pretty_node(s, depth + 1, "sup: ", out);
            }
            if let Some(s) = subscript {
                pretty_node(s, depth + 1, "sub: ", out);
            }
        }
        Node::Group(children) => {
            let _ = writeln!(out, "Group[{}]", children.len());
            for c in children {
                pretty_node(c, depth + 1, "", out);
            }
        }
    }
}

impl fmt::Display for MathAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::serialize(self))
    }
}
