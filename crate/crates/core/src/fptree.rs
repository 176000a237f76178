//! The extended FP-tree: weighted prefix paths over symbolic and base
//! interval items, a header of node lists per item, on-demand node lists for
//! upper intervals, and projection to conditional transactions.
//!
//! Items are replaced by tokens, their rank in a global insertion order.
//! Paths run from small tokens at the root to large tokens at the leaves, so
//! projecting on an item keeps exactly the items ranked before it.

use std::collections::HashMap;

use crate::model::{CountStats, Dataset, Domain, Item, ItemValue, Transaction};

pub type Token = u32;

/// The global insertion order. Symbols come first by descending positive
/// support, then each numeric attribute's bases in index order, attributes
/// in schema order; the bases of one attribute are therefore consecutive.
#[derive(Clone, Debug)]
pub struct TokenMap {
    items: Vec<Item>,
    /// Per attribute: token of symbol `s`, or of base `k` at `first + k`.
    symbol_tokens: Vec<Vec<Token>>,
    first_base: Vec<Option<Token>>,
    attr_of: Vec<u32>,
}

impl TokenMap {
    pub fn assign(d: &Dataset) -> TokenMap {
        let mut symbolic: Vec<(u64, u32, u32)> = Vec::new();
        for (a, attr) in d.attributes.iter().enumerate() {
            if let Domain::Symbolic { symbols } = &attr.domain {
                for s in 0..symbols.len() as u32 {
                    let pos = d.transactions.iter().filter(|t| t.positive && t.slots[a] == Some(s)).count();
                    symbolic.push((pos as u64, a as u32, s));
                }
            }
        }
        symbolic.sort_by(|x, y| y.0.cmp(&x.0).then((x.1, x.2).cmp(&(y.1, y.2))));

        let n_attrs = d.attributes.len();
        let mut map = TokenMap {
            items: Vec::new(),
            symbol_tokens: vec![Vec::new(); n_attrs],
            first_base: vec![None; n_attrs],
            attr_of: Vec::new(),
        };
        for (a, attr) in d.attributes.iter().enumerate() {
            if let Domain::Symbolic { symbols } = &attr.domain {
                map.symbol_tokens[a] = vec![0; symbols.len()];
            }
        }
        for (_, a, s) in symbolic {
            map.symbol_tokens[a as usize][s as usize] = map.items.len() as Token;
            map.push(Item::symbol(a, s));
        }
        for (a, attr) in d.attributes.iter().enumerate() {
            if let Domain::Numeric { cuts } = &attr.domain {
                map.first_base[a] = Some(map.items.len() as Token);
                for k in 0..cuts.n_bases() {
                    map.push(Item::interval(a as u32, k, k + 1));
                }
            }
        }
        map
    }

    fn push(&mut self, item: Item) {
        self.attr_of.push(item.attr);
        self.items.push(item);
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn item(&self, tok: Token) -> Item {
        self.items[tok as usize]
    }

    pub fn attr(&self, tok: Token) -> u32 {
        self.attr_of[tok as usize]
    }

    /// Token of the base or symbol held in slot `value` of attribute `attr`.
    pub fn slot_token(&self, attr: u32, value: u32) -> Token {
        match self.first_base[attr as usize] {
            Some(first) => first + value,
            None => self.symbol_tokens[attr as usize][value as usize],
        }
    }

    /// First base token of a numeric attribute.
    pub fn first_base(&self, attr: u32) -> Option<Token> {
        self.first_base[attr as usize]
    }

    /// Position of an item in the insertion order; an upper interval ranks
    /// with its lowest base.
    pub fn rank(&self, item: &Item) -> Token {
        match item.value {
            ItemValue::Symbol(s) => self.symbol_tokens[item.attr as usize][s as usize],
            ItemValue::Interval { lo, .. } => self.first_base[item.attr as usize].expect("numeric attribute") + lo,
        }
    }

    /// Tokens of a transaction, ascending.
    pub fn encode(&self, t: &Transaction) -> Vec<Token> {
        let mut toks: Vec<Token> = t
            .slots
            .iter()
            .enumerate()
            .filter_map(|(a, v)| v.map(|v| self.slot_token(a as u32, v)))
            .collect();
        toks.sort_unstable();
        toks
    }
}

/// A weighted conditional transaction. `pos_tids` lists the positive
/// transactions it stands for; `neg` counts the negative ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondTransaction {
    pub tokens: Vec<Token>,
    pub pos_tids: Vec<u32>,
    pub neg: u64,
}

impl CondTransaction {
    pub fn stats(&self) -> CountStats {
        CountStats::new(self.pos_tids.len() as u64, self.neg)
    }
}

/// The root-level conditional transactions of a dataset.
pub fn root_transactions(d: &Dataset, tm: &TokenMap) -> Vec<CondTransaction> {
    d.transactions
        .iter()
        .enumerate()
        .map(|(i, t)| CondTransaction {
            tokens: tm.encode(t),
            pos_tids: if t.positive { vec![i as u32] } else { Vec::new() },
            neg: u64::from(!t.positive),
        })
        .collect()
}

const ROOT: u32 = 0;

#[derive(Clone, Debug)]
struct Node {
    token: Token,
    parent: u32,
    neg: u64,
    /// Positive transactions whose path passes through this node.
    pos_tids: Vec<u32>,
    children: Vec<u32>,
}

#[derive(Clone, Debug, Default)]
pub struct HeaderEntry {
    pub nodes: Vec<u32>,
    pub stats: CountStats,
}

#[derive(Clone, Debug)]
pub struct FpTree {
    nodes: Vec<Node>,
    /// Present tokens, ascending, parallel to `entries`.
    tokens: Vec<Token>,
    entries: Vec<HeaderEntry>,
    uppers: HashMap<Item, Vec<u32>>,
    totals: CountStats,
}

/// Insert every transaction as a weighted prefix path. `totals` are the
/// counts of the whole context, including transactions left without items.
pub fn build_tree(transactions: &[CondTransaction], totals: CountStats) -> FpTree {
    let mut nodes = vec![Node { token: Token::MAX, parent: ROOT, neg: 0, pos_tids: Vec::new(), children: Vec::new() }];
    let mut tokens: Vec<Token> = transactions.iter().flat_map(|t| t.tokens.iter().copied()).collect();
    tokens.sort_unstable();
    tokens.dedup();
    let mut entries = vec![HeaderEntry::default(); tokens.len()];

    for t in transactions {
        debug_assert!(t.tokens.windows(2).all(|w| w[0] < w[1]));
        let mut cur = ROOT;
        for &tok in &t.tokens {
            let found = nodes[cur as usize].children.iter().copied().find(|&c| nodes[c as usize].token == tok);
            let next = match found {
                Some(c) => c,
                None => {
                    let id = nodes.len() as u32;
                    nodes.push(Node { token: tok, parent: cur, neg: 0, pos_tids: Vec::new(), children: Vec::new() });
                    nodes[cur as usize].children.push(id);
                    let h = tokens.binary_search(&tok).expect("token collected");
                    entries[h].nodes.push(id);
                    id
                }
            };
            let node = &mut nodes[next as usize];
            node.neg += t.neg;
            node.pos_tids.extend_from_slice(&t.pos_tids);
            cur = next;
        }
    }
    for e in &mut entries {
        let mut s = CountStats::default();
        for &n in &e.nodes {
            s.n_pos += nodes[n as usize].pos_tids.len() as u64;
            s.n_neg += nodes[n as usize].neg;
        }
        e.stats = s;
    }
    FpTree { nodes, tokens, entries, uppers: HashMap::new(), totals }
}

impl FpTree {
    /// Counts of the context (the pattern being extended).
    pub fn totals(&self) -> CountStats {
        self.totals
    }

    /// Tokens with a header entry, ascending.
    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn entry(&self, tok: Token) -> Option<&HeaderEntry> {
        self.tokens.binary_search(&tok).ok().map(|h| &self.entries[h])
    }

    pub fn stats(&self, tok: Token) -> CountStats {
        self.entry(tok).map(|e| e.stats).unwrap_or_default()
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Record the node list of an upper interval: the nodes of every base it
    /// spans.
    pub fn register_upper_links(&mut self, item: Item, tm: &TokenMap) {
        let ItemValue::Interval { lo, hi } = item.value else {
            panic!("only interval items have upper links");
        };
        if !item.is_upper() || self.uppers.contains_key(&item) {
            return;
        }
        let first = tm.first_base(item.attr).expect("numeric attribute");
        let mut list = Vec::new();
        for k in lo..hi {
            if let Some(e) = self.entry(first + k) {
                list.extend_from_slice(&e.nodes);
            }
        }
        self.uppers.insert(item, list);
    }

    /// Node list of a symbolic, base or registered upper item.
    pub fn item_nodes(&self, item: &Item, tm: &TokenMap) -> &[u32] {
        if item.is_upper() {
            self.uppers.get(item).map(Vec::as_slice).expect("upper item registered before use")
        } else {
            self.entry(tm.rank(item)).map(|e| e.nodes.as_slice()).unwrap_or(&[])
        }
    }

    /// Positive transactions covered by `context ∪ {item}`, in node order.
    pub fn positive_tids(&self, item: &Item, tm: &TokenMap) -> Vec<u32> {
        self.item_nodes(item, tm)
            .iter()
            .flat_map(|&n| self.nodes[n as usize].pos_tids.iter().copied())
            .collect()
    }

    /// The conditional transactions of `context ∪ {item}` and their totals.
    /// Paths that become empty are not emitted but still count in the totals.
    pub fn project(&self, item: &Item, tm: &TokenMap) -> (Vec<CondTransaction>, CountStats) {
        let mut out = Vec::new();
        let mut totals = CountStats::default();
        for &n in self.item_nodes(item, tm) {
            let node = &self.nodes[n as usize];
            totals.n_pos += node.pos_tids.len() as u64;
            totals.n_neg += node.neg;
            let mut tokens = Vec::new();
            let mut cur = node.parent;
            while cur != ROOT {
                let p = &self.nodes[cur as usize];
                tokens.push(p.token);
                cur = p.parent;
            }
            if tokens.is_empty() {
                continue;
            }
            tokens.reverse();
            out.push(CondTransaction { tokens, pos_tids: node.pos_tids.clone(), neg: node.neg });
        }
        (out, totals)
    }
}

/// Drop symbolic items whose positive count is below `min_pos`, and all
/// bases of a numeric attribute whose summed positive count is below it.
/// Bases of surviving attributes all stay, since they feed the wider
/// intervals. Transactions left empty are removed.
pub fn prune_items(transactions: &mut Vec<CondTransaction>, tm: &TokenMap, min_pos: u64) {
    let mut pos = vec![0u64; tm.len()];
    let mut attr_pos: HashMap<u32, u64> = HashMap::new();
    for t in transactions.iter() {
        let p = t.pos_tids.len() as u64;
        for &tok in &t.tokens {
            pos[tok as usize] += p;
            if tm.first_base(tm.attr(tok)).is_some() {
                *attr_pos.entry(tm.attr(tok)).or_default() += p;
            }
        }
    }
    let keep = |tok: Token| {
        let a = tm.attr(tok);
        if tm.first_base(a).is_some() {
            attr_pos.get(&a).copied().unwrap_or(0) >= min_pos
        } else {
            pos[tok as usize] >= min_pos
        }
    };
    for t in transactions.iter_mut() {
        t.tokens.retain(|&tok| keep(tok));
    }
    transactions.retain(|t| !t.tokens.is_empty());
}
