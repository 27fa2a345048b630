//! A brute-force model of the Hoare power domain: down-closed subsets of a
//! small finite poset, as bit masks.

use std::sync::Arc;

use smuc::domains::{Domain, NodeOrder, Value};

/// A finite poset given by its elements and a brute-force order.
pub struct Finite {
    pub domain: Domain,
    pub elems: Vec<Value>,
    pub le: fn(&Value, &Value) -> bool,
}

fn bools(v: &Value) -> (bool, bool) {
    let t = v.as_tuple().unwrap();
    (t[0].as_bool().unwrap(), t[1].as_bool().unwrap())
}

fn rank(v: &Value) -> usize {
    ["a", "b", "c", "d", "e"].iter().position(|n| *n == v.as_node().unwrap().as_str()).unwrap()
}

pub fn small_universes() -> Vec<Finite> {
    let five = Arc::new(NodeOrder::from_strs(&["a", "b", "c", "d", "e"]));
    let three = Arc::new(NodeOrder::from_strs(&["a", "b", "c"]));
    let pairs = [(false, false), (false, true), (true, false), (true, true)];
    vec![
        Finite {
            domain: Domain::product(vec![Domain::Bool, Domain::Bool]),
            elems: pairs.iter().map(|&(x, y)| Value::Tuple(vec![Value::Bool(x), Value::Bool(y)])).collect(),
            le: |a, b| {
                let ((a0, a1), (b0, b1)) = (bools(a), bools(b));
                (!a0 || b0) && (!a1 || b1)
            },
        },
        Finite {
            domain: Domain::Discrete(three),
            elems: ["a", "b", "c"].map(Value::node).to_vec(),
            le: |a, b| a == b,
        },
        Finite {
            // Earlier nodes are higher.
            domain: Domain::Nodes(five),
            elems: ["a", "b", "c", "d", "e"].map(Value::node).to_vec(),
            le: |a, b| rank(a) >= rank(b),
        },
    ]
}

impl Finite {
    pub fn down_closure(&self, mask: u32) -> u32 {
        let mut out = 0;
        for (i, x) in self.elems.iter().enumerate() {
            if (0..self.elems.len()).any(|j| mask & (1 << j) != 0 && (self.le)(x, &self.elems[j])) {
                out |= 1 << i;
            }
        }
        out
    }

    /// The maximal elements of a down-closed set, in value order.
    pub fn antichain(&self, down: u32) -> Value {
        let members: Vec<&Value> = (0..self.elems.len()).filter(|i| down & (1 << i) != 0).map(|i| &self.elems[i]).collect();
        let mut max: Vec<Value> = members
            .iter()
            .filter(|x| !members.iter().any(|y| y != *x && (self.le)(x, y)))
            .map(|x| (*x).clone())
            .collect();
        max.sort();
        Value::Antichain(max)
    }

    pub fn down_sets(&self) -> Vec<u32> {
        let mut out: Vec<u32> = (0..1u32 << self.elems.len()).map(|m| self.down_closure(m)).collect();
        out.sort();
        out.dedup();
        out
    }
}


/// Compares the Hoare order and operations over each small universe with
/// down-set inclusion, union and intersection on every pair. Returns the
/// number of pairs checked.
pub fn check_hoare_exhaustively() -> Result<usize, String> {
    let mut pairs = 0;
    for u in small_universes() {
        let h = Domain::hoare(u.domain.clone());
        let downs = u.down_sets();
        let full = (1u32 << u.elems.len()) - 1;
        let expect = |what: &str, got: Value, want: Value| {
            if got == want { Ok(()) } else { Err(format!("{h}: {what} gave {got}, expected {want}")) }
        };
        expect("bottom", h.bottom().map_err(|e| e.to_string())?, u.antichain(0))?;
        expect("top", h.top().map_err(|e| e.to_string())?, u.antichain(full))?;
        for &x in &downs {
            let a = u.antichain(x);
            for &y in &downs {
                let b = u.antichain(y);
                pairs += 1;
                let le = h.leq(&a, &b).map_err(|e| e.to_string())?;
                if le != (x & !y == 0) {
                    return Err(format!("{h}: {a} <= {b} gave {le}"));
                }
                expect("join", h.join(&a, &b).map_err(|e| e.to_string())?, u.antichain(x | y))?;
                expect("meet", h.meet(&a, &b).map_err(|e| e.to_string())?, u.antichain(x & y))?;
                if h.is_semiring() {
                    expect("plus", h.plus(&[a.clone(), b.clone()]).map_err(|e| e.to_string())?, u.antichain(x | y))?;
                    expect("times", h.times(&a, &b).map_err(|e| e.to_string())?, u.antichain(x & y))?;
                }
            }
        }
    }
    Ok(pairs)
}
