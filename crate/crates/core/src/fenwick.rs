//! Growable Fenwick tree over 0/1 flags: prefix counts and k-th one in O(log n).

#[derive(Clone, Debug, Default)]
pub(crate) struct Fenwick {
    /// 1-based; `tree[0]` unused.
    tree: Vec<i64>,
}

impl Fenwick {
    pub fn new() -> Self {
        Fenwick { tree: vec![0] }
    }

    pub fn len(&self) -> usize {
        self.tree.len() - 1
    }

    /// Appends a slot holding `v`.
    pub fn push(&mut self, v: i64) {
        let i = self.tree.len();
        let low = i & i.wrapping_neg();
        let node = v + self.prefix(i - 1) - self.prefix(i - low);
        self.tree.push(node);
    }

    pub fn add(&mut self, slot: usize, delta: i64) {
        let mut i = slot + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum over slots `< n`.
    pub fn prefix(&self, n: usize) -> i64 {
        let mut i = n.min(self.len());
        let mut s = 0;
        while i > 0 {
            s += self.tree[i];
            i &= i - 1;
        }
        s
    }

    /// Slot holding the `k`-th one (1-based `k`), assuming 0/1 values.
    pub fn select(&self, k: usize) -> Option<usize> {
        if k == 0 {
            return None;
        }
        let n = self.len();
        let mut pos = 0;
        let mut rem = k as i64;
        let mut step = if n == 0 { 0 } else { 1usize << (usize::BITS - 1 - n.leading_zeros()) };
        while step > 0 {
            let nxt = pos + step;
            if nxt <= n && self.tree[nxt] < rem {
                pos = nxt;
                rem -= self.tree[nxt];
            }
            step >>= 1;
        }
        (pos < n).then_some(pos)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_and_select_match_scan() {
        let mut f = Fenwick::new();
        let mut flags = Vec::new();
        for i in 0..300usize {
            let v = i64::from(i % 3 != 1);
            f.push(v);
            flags.push(v);
            if i % 7 == 0 && i > 0 && flags[i / 2] == 1 {
                f.add(i / 2, -1);
                flags[i / 2] = 0;
            }
        }
        for n in 0..=flags.len() {
            assert_eq!(f.prefix(n), flags[..n].iter().sum::<i64>());
        }
        let ones: Vec<usize> = (0..flags.len()).filter(|&i| flags[i] == 1).collect();
        for (k, &slot) in ones.iter().enumerate() {
            assert_eq!(f.select(k + 1), Some(slot));
        }
        assert_eq!(f.select(ones.len() + 1), None);
    }
}
