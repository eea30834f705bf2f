//! Indexed binary min-heap of vertices keyed by [`Key`].

use std::cmp::Ordering;

use crate::dyngraph::VertexId;

/// Lexicographic priority `[min(g, rhs) + h; min(g, rhs)]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Key {
    pub k1: f64,
    pub k2: f64,
}

impl Key {
    pub const INFINITE: Key = Key {
        k1: f64::INFINITY,
        k2: f64::INFINITY,
    };

    pub fn new(k1: f64, k2: f64) -> Self {
        Key { k1, k2 }
    }

    /// Strict lexicographic `≺`.
    pub fn precedes(&self, other: &Key) -> bool {
        self.cmp_total(other) == Ordering::Less
    }

    pub fn cmp_total(&self, other: &Key) -> Ordering {
        self.k1
            .total_cmp(&other.k1)
            .then_with(|| self.k2.total_cmp(&other.k2))
    }
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    key: Key,
    vertex: VertexId,
}

impl Entry {
    // ties on the key go to the smaller vertex id
    fn less(&self, other: &Entry) -> bool {
        match self.key.cmp_total(&other.key) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => self.vertex < other.vertex,
        }
    }
}

const ABSENT: usize = usize::MAX;

/// Priority queue with at most one live entry per vertex and exact removal.
#[derive(Clone, Debug, Default)]
pub struct SearchQueue {
    heap: Vec<Entry>,
    position: Vec<usize>,
}

impl SearchQueue {
    pub fn with_vertices(n: usize) -> Self {
        SearchQueue {
            heap: Vec::new(),
            position: vec![ABSENT; n],
        }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.position.get(v.index()).is_some_and(|&p| p != ABSENT)
    }

    pub fn key_of(&self, v: VertexId) -> Option<Key> {
        match self.position.get(v.index()) {
            Some(&p) if p != ABSENT => Some(self.heap[p].key),
            _ => None,
        }
    }

    /// `(∞, ∞)` when empty.
    pub fn top_key(&self) -> Key {
        self.heap.first().map_or(Key::INFINITE, |e| e.key)
    }

    pub fn top(&self) -> Option<(VertexId, Key)> {
        self.heap.first().map(|e| (e.vertex, e.key))
    }

    /// Inserts `v`, replacing any existing entry.
    pub fn insert(&mut self, v: VertexId, key: Key) {
        debug_assert!(!key.k1.is_nan() && !key.k2.is_nan());
        if v.index() >= self.position.len() {
            self.position.resize(v.index() + 1, ABSENT);
        }
        let p = self.position[v.index()];
        if p != ABSENT {
            let old = self.heap[p].key;
            self.heap[p].key = key;
            match key.cmp_total(&old) {
                Ordering::Less => self.sift_up(p),
                _ => self.sift_down(p),
            }
            return;
        }
        self.heap.push(Entry { key, vertex: v });
        let i = self.heap.len() - 1;
        self.position[v.index()] = i;
        self.sift_up(i);
    }

    pub fn remove(&mut self, v: VertexId) -> bool {
        let Some(&p) = self.position.get(v.index()) else {
            return false;
        };
        if p == ABSENT {
            return false;
        }
        self.take_at(p);
        true
    }

    pub fn pop(&mut self) -> Option<(VertexId, Key)> {
        if self.heap.is_empty() {
            return None;
        }
        let e = self.take_at(0);
        Some((e.vertex, e.key))
    }

    pub fn clear(&mut self) {
        for e in self.heap.drain(..) {
            self.position[e.vertex.index()] = ABSENT;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, Key)> + '_ {
        self.heap.iter().map(|e| (e.vertex, e.key))
    }

    fn take_at(&mut self, p: usize) -> Entry {
        let last = self.heap.len() - 1;
        self.swap(p, last);
        let e = self.heap.pop().expect("non-empty heap");
        self.position[e.vertex.index()] = ABSENT;
        if p < self.heap.len() {
            self.sift_down(p);
            self.sift_up(p);
        }
        e
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.heap.swap(a, b);
        self.position[self.heap[a].vertex.index()] = a;
        self.position[self.heap[b].vertex.index()] = b;
    }

    fn sift_up(&mut self, mut i: usize) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if self.heap[i].less(&self.heap[parent]) {
                self.swap(i, parent);
                i = parent;
            } else {
                break;
            }
        }
    }

    fn sift_down(&mut self, mut i: usize) {
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            let r = l + 1;
            let mut m = i;
            if l < n && self.heap[l].less(&self.heap[m]) {
                m = l;
            }
            if r < n && self.heap[r].less(&self.heap[m]) {
                m = r;
            }
            if m == i {
                break;
            }
            self.swap(i, m);
            i = m;
        }
    }
}
