//! Arena B-tree with per-child aggregates, shared by the three sequence types.
//!
//! Elements live in leaves; every internal node stores, next to each child id,
//! the aggregate of that child's subtree. Positions here are 0-based.

use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

/// Maximum number of items in a leaf and children in an internal node.
pub(crate) const MAX: usize = 32;
/// Non-root nodes never drop below this size after a removal completes.
const MIN: usize = MAX / 4;
const NIL: u32 = u32::MAX;
/// log_{MIN}(2^64) rounded up; no tree can be taller.
const MAX_HEIGHT: usize = 24;

pub(crate) trait Agg: Clone + Default {
    type Item: Copy + PartialEq + core::fmt::Debug;
    /// Maintain a key -> leaf map so that [`Tree::position_of_key`] works.
    const TRACK: bool = false;

    fn key(_it: &Self::Item) -> usize {
        0
    }
    fn count(&self) -> usize;
    fn add_item(&mut self, it: &Self::Item);
    fn sub_item(&mut self, it: &Self::Item);
    fn add(&mut self, other: &Self);
    fn sub(&mut self, other: &Self);
}

/// Left-to-right fold over whole subtrees and then single items.
pub(crate) trait Fold<A: Agg> {
    fn agg(&mut self, a: &A);
    fn item(&mut self, it: &A::Item);
}

/// Descent driven by aggregates: `skip` consumes a subtree that lies entirely
/// before the target, `hit` tests single items.
pub(crate) trait Seek<A: Agg> {
    fn skip(&mut self, a: &A) -> bool;
    fn hit(&mut self, it: &A::Item) -> bool;
}

/// Node-visit counter. Relaxed atomics keep the owning structure `Sync` while
/// queries take `&self`.
#[derive(Debug, Default)]
pub(crate) struct Visits(AtomicU64);

impl Visits {
    #[inline]
    fn bump(&self, k: u64) {
        self.0.fetch_add(k, Ordering::Relaxed);
    }
    pub(crate) fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }
}

impl Clone for Visits {
    fn clone(&self) -> Self {
        Visits(AtomicU64::new(self.get()))
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Node<A: Agg> {
    parent: u32,
    items: Vec<A::Item>,
    children: Vec<u32>,
    aggs: Vec<A>,
}

impl<A: Agg> Node<A> {
    fn leaf() -> Self {
        Node { parent: NIL, items: Vec::new(), children: Vec::new(), aggs: Vec::new() }
    }
    #[inline]
    fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
    #[inline]
    fn size(&self) -> usize {
        if self.is_leaf() { self.items.len() } else { self.children.len() }
    }
}

struct Path {
    steps: [(u32, u16); MAX_HEIGHT],
    len: usize,
}

impl Path {
    fn new() -> Self {
        Path { steps: [(NIL, 0); MAX_HEIGHT], len: 0 }
    }
    fn push(&mut self, node: u32, ci: usize) {
        self.steps[self.len] = (node, ci as u16);
        self.len += 1;
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Tree<A: Agg> {
    nodes: Vec<Node<A>>,
    free: Vec<u32>,
    root: u32,
    total: A,
    loc: Vec<u32>,
    visits: Visits,
}

impl<A: Agg> Default for Tree<A> {
    fn default() -> Self {
        Self::new()
    }
}

impl<A: Agg> Tree<A> {
    pub(crate) fn new() -> Self {
        Tree {
            nodes: vec![Node::leaf()],
            free: Vec::new(),
            root: 0,
            total: A::default(),
            loc: Vec::new(),
            visits: Visits::default(),
        }
    }

    /// Bulk construction with leaves about three-quarters full.
    pub(crate) fn from_items(items: &[A::Item]) -> Self {
        let mut t = Self::new();
        if items.is_empty() {
            return t;
        }
        t.nodes.clear();
        let fill = MAX * 3 / 4;
        let mut level: Vec<(u32, A)> = Vec::new();
        for chunk in even_chunks(items.len(), fill) {
            let id = t.nodes.len() as u32;
            let mut node = Node::leaf();
            let mut agg = A::default();
            for it in &items[chunk.0..chunk.1] {
                node.items.push(*it);
                agg.add_item(it);
                if A::TRACK {
                    t.set_loc(A::key(it), id);
                }
            }
            t.nodes.push(node);
            level.push((id, agg));
        }
        while level.len() > 1 {
            let mut up = Vec::new();
            for chunk in even_chunks(level.len(), fill) {
                let id = t.nodes.len() as u32;
                let mut node = Node::leaf();
                let mut agg = A::default();
                for (child, a) in &level[chunk.0..chunk.1] {
                    t.nodes[*child as usize].parent = id;
                    node.children.push(*child);
                    node.aggs.push(a.clone());
                    agg.add(a);
                }
                t.nodes.push(node);
                up.push((id, agg));
            }
            level = up;
        }
        let (root, total) = level.pop().unwrap();
        t.root = root;
        t.total = total;
        t
    }

    #[inline]
    pub(crate) fn len(&self) -> usize {
        self.total.count()
    }

    #[inline]
    pub(crate) fn total(&self) -> &A {
        &self.total
    }

    pub(crate) fn visits(&self) -> u64 {
        self.visits.get()
    }

    fn alloc(&mut self, node: Node<A>) -> u32 {
        if let Some(id) = self.free.pop() {
            self.nodes[id as usize] = node;
            id
        } else {
            self.nodes.push(node);
            (self.nodes.len() - 1) as u32
        }
    }

    fn release(&mut self, id: u32) {
        let n = &mut self.nodes[id as usize];
        n.items = Vec::new();
        n.children = Vec::new();
        n.aggs = Vec::new();
        n.parent = NIL;
        self.free.push(id);
    }

    fn set_loc(&mut self, key: usize, leaf: u32) {
        if key >= self.loc.len() {
            self.loc.resize(key + 1, NIL);
        }
        self.loc[key] = leaf;
    }

    /// Walks to the leaf holding `pos`. With `pos == len` it lands after the
    /// last item, which is the insertion case.
    fn descend(&self, mut pos: usize, path: &mut Path) -> (u32, usize) {
        let mut node = self.root;
        let mut seen = 1;
        loop {
            let n = &self.nodes[node as usize];
            if n.is_leaf() {
                self.visits.bump(seen);
                return (node, pos);
            }
            let last = n.aggs.len() - 1;
            let mut ci = 0;
            while ci < last {
                let c = n.aggs[ci].count();
                if pos < c {
                    break;
                }
                pos -= c;
                ci += 1;
            }
            path.push(node, ci);
            node = n.children[ci];
            seen += 1;
        }
    }

    pub(crate) fn get(&self, pos: usize) -> A::Item {
        debug_assert!(pos < self.len());
        let mut path = Path::new();
        let (leaf, off) = self.descend(pos, &mut path);
        self.nodes[leaf as usize].items[off]
    }

    /// Replaces the item at `pos` by `f(item)`, keeping aggregates in sync.
    pub(crate) fn update(&mut self, pos: usize, f: impl FnOnce(A::Item) -> A::Item) {
        debug_assert!(pos < self.len());
        let mut path = Path::new();
        let (leaf, off) = self.descend(pos, &mut path);
        let old = self.nodes[leaf as usize].items[off];
        let new = f(old);
        self.nodes[leaf as usize].items[off] = new;
        for &(node, ci) in &path.steps[..path.len] {
            let a = &mut self.nodes[node as usize].aggs[ci as usize];
            a.sub_item(&old);
            a.add_item(&new);
        }
        self.total.sub_item(&old);
        self.total.add_item(&new);
    }

    pub(crate) fn insert(&mut self, pos: usize, item: A::Item) {
        debug_assert!(pos <= self.len());
        let mut path = Path::new();
        let (leaf, off) = self.descend(pos, &mut path);
        self.nodes[leaf as usize].items.insert(off, item);
        if A::TRACK {
            self.set_loc(A::key(&item), leaf);
        }
        for &(node, ci) in &path.steps[..path.len] {
            self.nodes[node as usize].aggs[ci as usize].add_item(&item);
        }
        self.total.add_item(&item);
        if self.nodes[leaf as usize].items.len() > MAX {
            self.split_up(leaf, &path);
        }
    }

    fn split_up(&mut self, mut node: u32, path: &Path) {
        let mut depth = path.len;
        while self.nodes[node as usize].size() > MAX {
            let half = self.nodes[node as usize].size() / 2;
            let mut right = Node::leaf();
            let mut ragg = A::default();
            let right_id = self.alloc(Node::leaf());
            {
                let n = &mut self.nodes[node as usize];
                if n.is_leaf() {
                    right.items = n.items.split_off(half);
                    for it in &right.items {
                        ragg.add_item(it);
                    }
                } else {
                    right.children = n.children.split_off(half);
                    right.aggs = n.aggs.split_off(half);
                    for a in &right.aggs {
                        ragg.add(a);
                    }
                }
            }
            if right.is_leaf() {
                if A::TRACK {
                    for k in 0..right.items.len() {
                        let key = A::key(&right.items[k]);
                        self.set_loc(key, right_id);
                    }
                }
            } else {
                for &c in &right.children {
                    self.nodes[c as usize].parent = right_id;
                }
            }
            if depth == 0 {
                let mut lagg = self.total.clone();
                lagg.sub(&ragg);
                let mut root = Node::leaf();
                root.children = vec![node, right_id];
                root.aggs = vec![lagg, ragg];
                let root_id = self.alloc(root);
                self.nodes[node as usize].parent = root_id;
                right.parent = root_id;
                self.nodes[right_id as usize] = right;
                self.root = root_id;
                return;
            }
            let (parent, ci) = path.steps[depth - 1];
            let ci = ci as usize;
            right.parent = parent;
            self.nodes[right_id as usize] = right;
            let p = &mut self.nodes[parent as usize];
            p.aggs[ci].sub(&ragg);
            p.children.insert(ci + 1, right_id);
            p.aggs.insert(ci + 1, ragg);
            node = parent;
            depth -= 1;
        }
    }

    pub(crate) fn remove(&mut self, pos: usize) -> A::Item {
        debug_assert!(pos < self.len());
        let mut path = Path::new();
        let (leaf, off) = self.descend(pos, &mut path);
        let item = self.nodes[leaf as usize].items.remove(off);
        for &(node, ci) in &path.steps[..path.len] {
            self.nodes[node as usize].aggs[ci as usize].sub_item(&item);
        }
        self.total.sub_item(&item);
        self.rebalance(leaf, &path);
        item
    }

    fn rebalance(&mut self, mut node: u32, path: &Path) {
        let mut depth = path.len;
        while depth > 0 && self.nodes[node as usize].size() < MIN {
            let (parent, ci) = path.steps[depth - 1];
            let ci = ci as usize;
            let nch = self.nodes[parent as usize].children.len();
            if nch < 2 {
                break;
            }
            let (li, ri) = if ci > 0 { (ci - 1, ci) } else { (0, 1) };
            let l = self.nodes[parent as usize].children[li];
            let r = self.nodes[parent as usize].children[ri];
            let (ls, rs) = (self.nodes[l as usize].size(), self.nodes[r as usize].size());
            if ls + rs <= MAX {
                self.merge_into(l, r);
                let p = &mut self.nodes[parent as usize];
                let ragg = p.aggs.remove(ri);
                p.children.remove(ri);
                p.aggs[li].add(&ragg);
                self.release(r);
            } else {
                self.borrow(parent, li, ri, ci == li);
                break;
            }
            node = parent;
            depth -= 1;
        }
        loop {
            let root = &self.nodes[self.root as usize];
            if root.is_leaf() || root.children.len() > 1 {
                break;
            }
            let child = root.children[0];
            let old = self.root;
            self.nodes[child as usize].parent = NIL;
            self.root = child;
            self.release(old);
        }
    }

    fn merge_into(&mut self, l: u32, r: u32) {
        let mut rn = core::mem::replace(&mut self.nodes[r as usize], Node::leaf());
        if rn.is_leaf() {
            if A::TRACK {
                for it in &rn.items {
                    let key = A::key(it);
                    self.set_loc(key, l);
                }
            }
            self.nodes[l as usize].items.append(&mut rn.items);
        } else {
            for &c in &rn.children {
                self.nodes[c as usize].parent = l;
            }
            let ln = &mut self.nodes[l as usize];
            ln.children.append(&mut rn.children);
            ln.aggs.append(&mut rn.aggs);
        }
    }

    /// Moves one element across the `li`/`ri` boundary towards the small side.
    fn borrow(&mut self, parent: u32, li: usize, ri: usize, into_left: bool) {
        let l = self.nodes[parent as usize].children[li];
        let r = self.nodes[parent as usize].children[ri];
        let mut moved = A::default();
        if self.nodes[l as usize].is_leaf() {
            let it = if into_left {
                let it = self.nodes[r as usize].items.remove(0);
                self.nodes[l as usize].items.push(it);
                it
            } else {
                let it = self.nodes[l as usize].items.pop().unwrap();
                self.nodes[r as usize].items.insert(0, it);
                it
            };
            moved.add_item(&it);
            if A::TRACK {
                self.set_loc(A::key(&it), if into_left { l } else { r });
            }
        } else {
            let (c, a) = if into_left {
                let rn = &mut self.nodes[r as usize];
                let c = rn.children.remove(0);
                let a = rn.aggs.remove(0);
                let ln = &mut self.nodes[l as usize];
                ln.children.push(c);
                ln.aggs.push(a.clone());
                (c, a)
            } else {
                let ln = &mut self.nodes[l as usize];
                let c = ln.children.pop().unwrap();
                let a = ln.aggs.pop().unwrap();
                let rn = &mut self.nodes[r as usize];
                rn.children.insert(0, c);
                rn.aggs.insert(0, a.clone());
                (c, a)
            };
            self.nodes[c as usize].parent = if into_left { l } else { r };
            moved = a;
        }
        let p = &mut self.nodes[parent as usize];
        if into_left {
            p.aggs[ri].sub(&moved);
            p.aggs[li].add(&moved);
        } else {
            p.aggs[li].sub(&moved);
            p.aggs[ri].add(&moved);
        }
    }

    /// Folds the first `k` elements.
    pub(crate) fn prefix<F: Fold<A>>(&self, mut k: usize, f: &mut F) {
        debug_assert!(k <= self.len());
        if k == 0 {
            return;
        }
        if k == self.len() {
            f.agg(&self.total);
            return;
        }
        let mut node = self.root;
        let mut seen = 1;
        'down: loop {
            let n = &self.nodes[node as usize];
            if n.is_leaf() {
                for it in &n.items[..k] {
                    f.item(it);
                }
                break;
            }
            for (ci, a) in n.aggs.iter().enumerate() {
                let c = a.count();
                if k >= c {
                    f.agg(a);
                    k -= c;
                    if k == 0 {
                        break 'down;
                    }
                } else {
                    node = n.children[ci];
                    seen += 1;
                    continue 'down;
                }
            }
            break;
        }
        self.visits.bump(seen);
    }

    /// Returns the 0-based position of the first item accepted by `s.hit`,
    /// skipping whole subtrees that `s.skip` consumes.
    pub(crate) fn seek<S: Seek<A>>(&self, s: &mut S) -> Option<usize> {
        let mut node = self.root;
        let mut pos = 0;
        let mut seen = 1;
        let found = 'down: loop {
            let n = &self.nodes[node as usize];
            if n.is_leaf() {
                for it in &n.items {
                    if s.hit(it) {
                        break 'down Some(pos);
                    }
                    pos += 1;
                }
                break None;
            }
            for (ci, a) in n.aggs.iter().enumerate() {
                if s.skip(a) {
                    pos += a.count();
                } else {
                    node = n.children[ci];
                    seen += 1;
                    continue 'down;
                }
            }
            break None;
        };
        self.visits.bump(seen);
        found
    }

    /// 0-based position of the tracked item with the given key.
    pub(crate) fn position_of_key(&self, key: usize) -> usize {
        debug_assert!(A::TRACK);
        let leaf = self.loc[key];
        let items = &self.nodes[leaf as usize].items;
        let mut pos = items.iter().position(|it| A::key(it) == key).expect("stale locator");
        let mut node = leaf;
        let mut seen = 1;
        loop {
            let parent = self.nodes[node as usize].parent;
            if parent == NIL {
                break;
            }
            let p = &self.nodes[parent as usize];
            for (c, a) in p.children.iter().zip(&p.aggs) {
                if *c == node {
                    break;
                }
                pos += a.count();
            }
            node = parent;
            seen += 1;
        }
        self.visits.bump(seen);
        pos
    }

    pub(crate) fn to_vec(&self) -> Vec<A::Item> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            let n = &self.nodes[id as usize];
            if n.is_leaf() {
                out.extend_from_slice(&n.items);
            } else {
                stack.extend(n.children.iter().rev());
            }
        }
        out
    }

    /// Structural self-check used by tests: sizes, parent links, aggregates
    /// and locators. Returns the height.
    #[cfg(test)]
    pub(crate) fn check(&self) -> usize
    where
        A: PartialEq + core::fmt::Debug,
    {
        fn walk<A: Agg + PartialEq + core::fmt::Debug>(t: &Tree<A>, id: u32, is_root: bool) -> (A, usize) {
            let n = &t.nodes[id as usize];
            if !is_root {
                assert!(n.size() >= MIN && n.size() <= MAX, "node size {}", n.size());
            }
            let mut agg = A::default();
            if n.is_leaf() {
                for it in &n.items {
                    agg.add_item(it);
                    if A::TRACK {
                        assert_eq!(t.loc[A::key(it)], id);
                    }
                }
                return (agg, 1);
            }
            let mut h = None;
            for (c, a) in n.children.iter().zip(&n.aggs) {
                assert_eq!(t.nodes[*c as usize].parent, id);
                let (sub, hh) = walk(t, *c, false);
                assert_eq!(&sub, a);
                assert!(h.is_none() || h == Some(hh), "uneven leaf depth");
                h = Some(hh);
                agg.add(a);
            }
            (agg, h.unwrap() + 1)
        }
        let (agg, h) = walk(self, self.root, true);
        assert_eq!(agg, self.total);
        h
    }
}

/// Splits `len` items into consecutive groups of at most `fill` whose sizes
/// differ by at most one.
fn even_chunks(len: usize, fill: usize) -> impl Iterator<Item = (usize, usize)> {
    let k = len.div_ceil(fill).max(1);
    let base = len / k;
    let extra = len % k;
    (0..k).scan(0, move |start, g| {
        let size = base + usize::from(g < extra);
        let s = *start;
        *start += size;
        Some((s, s + size))
    })
}
