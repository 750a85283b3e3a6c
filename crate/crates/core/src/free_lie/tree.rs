/// A formal bracket tree over 0-based generator slots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf(usize),
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn node(l: Tree, r: Tree) -> Tree {
        Tree::Node(Box::new(l), Box::new(r))
    }

    pub fn degree(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(l, r) => l.degree() + r.degree(),
        }
    }

    /// Leaf multiplicities over `generators` slots.
    pub fn btype(&self, generators: usize) -> Vec<u32> {
        let mut v = vec![0; generators];
        self.count_leaves(&mut v);
        v
    }

    fn count_leaves(&self, v: &mut [u32]) {
        match self {
            Tree::Leaf(g) => v[*g] += 1,
            Tree::Node(l, r) => {
                l.count_leaves(v);
                r.count_leaves(v);
            }
        }
    }

    pub fn max_leaf(&self) -> usize {
        match self {
            Tree::Leaf(g) => *g,
            Tree::Node(l, r) => l.max_leaf().max(r.max_leaf()),
        }
    }

    /// Renames every leaf through `f`.
    pub fn map_leaves(&self, f: &impl Fn(usize) -> usize) -> Tree {
        match self {
            Tree::Leaf(g) => Tree::Leaf(f(*g)),
            Tree::Node(l, r) => Tree::node(l.map_leaves(f), r.map_leaves(f)),
        }
    }
}
