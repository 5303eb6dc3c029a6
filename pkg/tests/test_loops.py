from acctuner.loops import DEFINE, REF, SET

from conftest import analyze


def accesses_of(accesses, var):
    return [(a.kind, a.loop_path) for a in accesses if a.var == var]


def test_sibling_loops_numbered_in_order():
    _, tree, _ = analyze(
        "int main(){int i; int j;"
        " for(i=0;i<3;i++){} for(j=0;j<3;j++){} }")
    assert [(n.loop_id, n.parent) for n in tree.nodes] == [(0, None), (1, None)]


def test_nested_loops_parent_links():
    _, tree, _ = analyze(
        "int main(){int i; int j; for(i=0;i<3;i++){ for(j=0;j<3;j++){} }}")
    assert tree.node(0).parent is None
    assert tree.node(1).parent == 0
    assert tree.node(0).children == [1]
    assert tree.ancestors(1) == (0,)
    assert tree.subtree(0) == (0, 1)


def test_while_wrapping_for_numbering():
    _, tree, _ = analyze(
        "int main(){int c; int i; c = 1;"
        " while(c < 10){ for(i=0;i<3;i++){} c = c + 1; }}")
    assert tree.node(0).kind == "while"
    assert tree.node(0).canonical is False
    assert tree.node(1).kind == "for"
    assert tree.node(1).parent == 0


def test_preorder_matches_textual_order():
    text = """int main() {
    int a; int b; int c; int d;
    for (a = 0; a < 2; a++) {
        for (b = 0; b < 2; b++) { b = b; }
        for (c = 0; c < 2; c++) { c = c; }
    }
    while (d < 2) { d = d + 1; }
}
"""
    _, tree, _ = analyze(text)
    positions = [(n.header_pos.line, n.header_pos.col) for n in tree.nodes]
    assert positions == sorted(positions)
    assert [n.loop_id for n in tree.nodes] == [0, 1, 2, 3]


def test_canonical_flags():
    text = """int main() {
    int i; int j; int k; int m; int n;
    for (i = 0; i < 10; i++) {}
    for (j = 0; j <= 10; j += 2) {}
    for (k = 10; k > 0; k--) {}
    for (m = 0; m < 10; m = m * 2) {}
    while (n < 3) { n = n + 1; }
}
"""
    _, tree, _ = analyze(text)
    assert [n.canonical for n in tree.nodes] == [True, True, False, False, False]
    assert [n.counter for n in tree.nodes] == ["i", "j", "k", "m", None]


def test_array_assignment_classification():
    _, _, accesses = analyze(
        "int main(){int i; int a[10]; int b[10];"
        " for(i=0;i<10;i++){ a[i] = b[i] + 1; }}")
    in_loop = [a for a in accesses if a.loop_path == (0,) and a.header_of is None]
    as_pairs = [(a.var, a.kind) for a in in_loop]
    assert as_pairs.count(("a", SET)) == 1
    assert as_pairs.count(("b", REF)) == 1
    assert as_pairs.count(("i", REF)) == 2
    assert ("a", REF) not in as_pairs


def test_define_outside_loops():
    _, _, accesses = analyze("int main(){int x;}")
    assert accesses_of(accesses, "x") == [(DEFINE, ())]


def test_compound_assignment_set_and_ref():
    _, _, accesses = analyze(
        "int main(){int i; int s; int a[10]; s = 0;"
        " for(i=0;i<10;i++){ s += a[i]; }}")
    in_loop = [(a.var, a.kind) for a in accesses
               if a.loop_path == (0,) and a.header_of is None]
    assert (("s", SET) in in_loop) and (("s", REF) in in_loop)
    assert ("a", REF) in in_loop and ("i", REF) in in_loop
    s_set = [a for a in accesses if a.var == "s" and a.kind == SET and a.loop_path]
    s_ref = [a for a in accesses if a.var == "s" and a.kind == REF and a.loop_path]
    assert s_set[0].pos == s_ref[0].pos


def test_header_accesses_tagged():
    _, _, accesses = analyze("int main(){int i; for(i=0;i<10;i++){ i = i; }}")
    header = [a for a in accesses if a.header_of == 0]
    body = [a for a in accesses if a.loop_path == (0,) and a.header_of is None]
    assert {a.kind for a in header} == {SET, REF}
    assert len(body) == 2   # i = i
    assert all(a.loop_path == (0,) for a in header)


def test_loop_path_matches_ancestor_chain():
    text = """int main() {
    int i; int j; int k; int a[10];
    for (i = 0; i < 2; i++) {
        for (j = 0; j < 2; j++) {
            a[j] = 1;
        }
    }
    for (k = 0; k < 2; k++) { a[k] = 2; }
}
"""
    _, tree, accesses = analyze(text)
    for access in accesses:
        if not access.loop_path:
            continue
        innermost = access.loop_path[-1]
        chain = tuple(reversed(tree.ancestors(innermost))) + (innermost,)
        assert access.loop_path == chain


def test_array_call_argument_marked_set_and_ref():
    _, _, accesses = analyze(
        "int main(){float buf[8]; int n; n = 8; process(buf, n);}")
    buf = [(a.kind, a.is_array) for a in accesses if a.var == "buf"]
    assert (REF, True) in buf and (SET, True) in buf
    n_kinds = {a.kind for a in accesses if a.var == "n"}
    assert SET in n_kinds and REF in n_kinds and DEFINE in n_kinds


def test_index_normalization():
    _, _, accesses = analyze(
        "int main(){int i; int a[10];"
        " for(i=1;i<9;i++){ a[i] = a[i-1] + a[i+1] + a[0]; }}")
    refs = [a.indices for a in accesses
            if a.var == "a" and a.kind == REF and a.loop_path]
    assert (("i", -1),) in refs
    assert (("i", 1),) in refs
    assert ((None, 0),) in refs
    sets = [a.indices for a in accesses if a.var == "a" and a.kind == SET]
    assert sets == [(("i", 0),)]


def test_unanalyzable_index_is_none_dim():
    _, _, accesses = analyze(
        "int main(){int i; int a[10]; for(i=0;i<5;i++){ a[i*2] = 1; }}")
    sets = [a.indices for a in accesses if a.var == "a" and a.kind == SET]
    assert sets == [(None,)]


def test_two_dimensional_indices():
    _, _, accesses = analyze(
        "int main(){int i; int j; float m[4][4];"
        " for(i=0;i<4;i++){ for(j=0;j<4;j++){ m[i][j] = m[i-1][j] * 2.0; }}}")
    m_sets = [a.indices for a in accesses if a.var == "m" and a.kind == SET]
    m_refs = [a.indices for a in accesses
              if a.var == "m" and a.kind == REF and a.loop_path]
    assert m_sets == [(("i", 0), ("j", 0))]
    assert (("i", -1), ("j", 0)) in m_refs


def test_block_scoping_of_declarations():
    text = """int main() {
    int i;
    for (i = 0; i < 4; i++) {
        float tmp[4];
        tmp[0] = 1.0;
    }
    return 0;
}
"""
    _, _, accesses = analyze(text)
    tmp = [(a.kind, a.loop_path) for a in accesses if a.var == "tmp"]
    assert (DEFINE, (0,)) in tmp
    assert all(path == (0,) for _, path in tmp)
