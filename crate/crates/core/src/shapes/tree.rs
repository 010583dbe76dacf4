use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

#[derive(Clone)]
pub struct TreeShape(Arc<Inner>);

struct Inner {
    children: Option<(TreeShape, TreeShape)>,
    leaves: usize,
    encoding: Box<str>,
}

impl TreeShape {
    pub fn leaf() -> TreeShape {
        static LEAF: OnceLock<TreeShape> = OnceLock::new();
        LEAF.get_or_init(|| {
            TreeShape(Arc::new(Inner {
                children: None,
                leaves: 1,
                encoding: "*".into(),
            }))
        })
        .clone()
    }

    /// Joins two shapes under a new root, putting the children in canonical order.
    pub fn node(a: TreeShape, b: TreeShape) -> TreeShape {
        let (left, right) = if a <= b { (a, b) } else { (b, a) };
        let mut encoding =
            String::with_capacity(left.0.encoding.len() + right.0.encoding.len() + 3);
        encoding.push('(');
        encoding.push_str(&left.0.encoding);
        encoding.push(',');
        encoding.push_str(&right.0.encoding);
        encoding.push(')');
        let leaves = left.0.leaves + right.0.leaves;
        TreeShape(Arc::new(Inner {
            children: Some((left, right)),
            leaves,
            encoding: encoding.into(),
        }))
    }

    pub fn leaf_count(&self) -> usize {
        self.0.leaves
    }

    pub fn is_leaf(&self) -> bool {
        self.0.children.is_none()
    }

    /// The two subtrees of the root in canonical order, or `None` for a leaf.
    pub fn children(&self) -> Option<(&TreeShape, &TreeShape)> {
        self.0.children.as_ref().map(|(l, r)| (l, r))
    }

    pub fn encoding(&self) -> &str {
        &self.0.encoding
    }

    /// Rebuilds the shape bottom-up. Shapes are canonical on construction, so
    /// this is the identity; it exists as the explicit normal-form operation.
    pub fn canonicalize(&self) -> TreeShape {
        match self.children() {
            None => TreeShape::leaf(),
            Some((l, r)) => TreeShape::node(l.canonicalize(), r.canonicalize()),
        }
    }

    /// Number of internal nodes (always `leaf_count - 1`).
    pub fn internal_nodes(&self) -> usize {
        self.leaf_count() - 1
    }

    pub fn depth(&self) -> usize {
        match self.children() {
            None => 0,
            Some((l, r)) => 1 + l.depth().max(r.depth()),
        }
    }
}

fn rank(c: u8) -> u8 {
    match c {
        b'*' => 0,
        b'(' => 1,
        b',' => 2,
        b')' => 3,
        _ => 4,
    }
}

/// Compares two encodings under the alphabet ranking `*` < `(` < `,` < `)`.
pub fn compare_encodings(a: &str, b: &str) -> Ordering {
    a.bytes().map(rank).cmp(b.bytes().map(rank))
}

impl PartialEq for TreeShape {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.encoding == other.0.encoding
    }
}

impl Eq for TreeShape {}

impl Hash for TreeShape {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.encoding.hash(state);
    }
}

impl Ord for TreeShape {
    fn cmp(&self, other: &Self) -> Ordering {
        self.leaf_count()
            .cmp(&other.leaf_count())
            .then_with(|| compare_encodings(self.encoding(), other.encoding()))
    }
}

impl PartialOrd for TreeShape {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.encoding())
    }
}

impl fmt::Debug for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TreeShape({})", self.encoding())
    }
}

impl std::str::FromStr for TreeShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_shape(s)
    }
}

pub fn serialize_shape(t: &TreeShape) -> String {
    t.encoding().to_string()
}

/// Parses a leafless Newick-like expression such as `((*,*),(*,(*,*)))`.
///
/// Whitespace is ignored. Child order in the input is irrelevant; the result
/// is canonical.
pub fn parse_shape(text: &str) -> Result<TreeShape> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.error("empty input"));
    }
    let shape = p.shape()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(shape),
        Some(b')') => Err(p.error("unbalanced parentheses: unexpected ')'")),
        Some(_) => Err(p.error("unexpected trailing input")),
    }
}

/// Parses one shape per non-empty line; `#` starts a comment line.
pub fn parse_shape_list(text: &str) -> Result<Vec<TreeShape>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        if !trimmed.is_empty() && !trimmed.starts_with('#') {
            let shape = parse_shape(line).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse {
                    pos: pos + offset,
                    msg,
                },
                other => other,
            })?;
            out.push(shape);
        }
        offset += line.len();
    }
    Ok(out)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn expect(&mut self, want: u8, missing: &str) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            None => Err(self.error(missing)),
            Some(b',') if want == b')' => Err(self.error("non-binary node: more than two children")),
            Some(b')') if want == b',' => Err(self.error("non-binary node: only one child")),
            Some(c) => Err(self.error(&format!(
                "expected '{}', found '{}'",
                want as char,
                char::from(c)
            ))),
        }
    }

    fn shape(&mut self) -> Result<TreeShape> {
        self.skip_ws();
        match self.peek() {
            Some(b'*') => {
                self.pos += 1;
                Ok(TreeShape::leaf())
            }
            Some(b'(') => {
                self.pos += 1;
                let left = self.shape()?;
                self.expect(b',', "unbalanced parentheses: missing ')'")?;
                let right = self.shape()?;
                self.expect(b')', "unbalanced parentheses: missing ')'")?;
                Ok(TreeShape::node(left, right))
            }
            None => Err(self.error("unexpected end of input")),
            Some(b')') => Err(self.error("empty subtree")),
            Some(b',') => Err(self.error("empty subtree")),
            Some(c) => Err(self.error(&format!("unexpected character '{}'", char::from(c)))),
        }
    }
}
