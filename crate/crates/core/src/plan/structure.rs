use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::PlanError;

/// Block sizes and overlaps of a search structure, e.g. `B6,8,6-O5`.
///
/// Both lists are cycled when a cycle needs more blocks than they name.
/// Block `j` has size `sizes[j % len]` and overlaps block `j + 1` by
/// `overlaps[j % len]` positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct StructureSpec {
    sizes: Vec<usize>,
    overlaps: Vec<usize>,
    truncated: bool,
}

impl StructureSpec {
    pub fn new(sizes: Vec<usize>, overlaps: Vec<usize>, truncated: bool) -> Result<Self, PlanError> {
        let spec = Self {
            sizes,
            overlaps,
            truncated,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks every (donor, overlap, receiver) pairing the cycled lists can
    /// produce.
    fn validate(&self) -> Result<(), PlanError> {
        if self.sizes.is_empty() || self.overlaps.is_empty() {
            return Err(PlanError::Validation("empty size or overlap list".into()));
        }
        if self.sizes.contains(&0) {
            return Err(PlanError::Validation("block size must be at least 1".into()));
        }
        let period = lcm(self.sizes.len(), self.overlaps.len());
        for j in 0..period {
            let (donor, overlap, receiver) = (self.size_at(j), self.overlap_at(j), self.size_at(j + 1));
            if overlap >= donor.min(receiver) {
                return Err(PlanError::Validation(format!(
                    "overlap {overlap} is not smaller than adjacent block sizes {donor} and {receiver}"
                )));
            }
        }
        Ok(())
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn overlaps(&self) -> &[usize] {
        &self.overlaps
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn size_at(&self, block: usize) -> usize {
        self.sizes[block % self.sizes.len()]
    }

    pub fn overlap_at(&self, block: usize) -> usize {
        self.overlaps[block % self.overlaps.len()]
    }

    pub fn max_size(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for StructureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.truncated {
            f.write_str("T-")?;
        }
        write!(f, "B{}-O{}", join(&self.sizes), join(&self.overlaps))
    }
}

impl FromStr for StructureSpec {
    type Err = PlanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_structure_name(s)
    }
}

/// Parses `["T-"] "B" int ("," int)* "-O" int ("," int)*`.
pub fn parse_structure_name(name: &str) -> Result<StructureSpec, PlanError> {
    let mut p = Cursor { src: name.as_bytes(), pos: 0 };
    let truncated = p.eat(b"T-");
    p.expect(b"B", "'B'")?;
    let sizes = p.int_list()?;
    p.expect(b"-O", "'-O'")?;
    let overlaps = p.int_list()?;
    if p.pos != p.src.len() {
        return Err(p.error("end of name"));
    }
    StructureSpec::new(sizes, overlaps, truncated)
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn error(&self, expected: &str) -> PlanError {
        PlanError::Parse {
            position: self.pos,
            expected: expected.to_string(),
        }
    }

    fn eat(&mut self, tok: &[u8]) -> bool {
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &[u8], what: &str) -> Result<(), PlanError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn int(&mut self) -> Result<usize, PlanError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| PlanError::Parse {
                position: start,
                expected: "integer in range".into(),
            })
    }

    fn int_list(&mut self) -> Result<Vec<usize>, PlanError> {
        let mut out = vec![self.int()?];
        while self.eat(b",") {
            out.push(self.int()?);
        }
        Ok(out)
    }
}
