"""Source listings of the built-in meta-interpreters."""

# --- Vanilla family ---

# The vanilla meta-interpreter
M0_SOURCE = """
solve(true).
solve((A, B)) :- solve(A), solve(B).
solve(A) :- clause(A, B), solve(B).
"""

# Sound but not complete
M1_SOURCE = """
solve(_) :- fail.
"""

# Computes the depth of the proof alongside the answer
M2_SOURCE = """
solve(true, 0).
solve((A, B), K) :- solve(A, M), solve(B, N), max(M, N, K).
solve(A, s(N)) :- clause(A, B), solve(B, N).

max(0, 0, 0).
max(s(X), 0, s(X)).
max(0, s(X), s(X)).
max(s(X), s(Y), s(Z)) :- max(X, Y, Z).
"""

# Skips clauses whose bodies call undefined predicates
M3_SOURCE = """
solve(true).
solve((A, B)) :- solve(A), solve(B).
solve(A) :- clause(A, B), check(B), solve(B).

check((A, B)) :- check(A), check(B).
check(A) :- clause(A, _).
check(true).
"""

# Vanilla extended with negation as failure
M4_SOURCE = """
solve(true).
solve((A, B)) :- solve(A), solve(B).
solve(\\+ A) :- \\+ solve(A).
solve(A) :- clause(A, B), solve(B).
"""

# --- Double extended interpreters ---

# Pure tracer for the four port box model
FOUR_PORT_SOURCE = """
solve(true).
solve((G1, G2)) :- solve(G1), solve(G2).
solve(G) :- before(G), clause(G, B), solve(B), after(G).

before(G) :- write('call '), write(G), nl.
before(G) :- write('fail '), write(G), nl, fail.

after(G) :- write('succeed '), write(G), nl.
after(G) :- write('redo '), write(G), nl, fail.
"""

# Builds a proof tree in the second argument
PROOF_TREE_SOURCE = """
solve(true, true).
solve((A, B), (ProofA, ProofB)) :- solve(A, ProofA), solve(B, ProofB).
solve(A, (A :- Proof)) :- clause(A, B), solve(B, Proof).
"""

# Instantiates the body before solving it
EX43_SOURCE = """
solve(true).
solve((A, B)) :- solve(A), solve(B).
solve(A) :- clause(A, B), B = q(f(Z)), solve(B).
"""

# --- Double extended interpreters that are not restricted ---

# Extra arguments fixed to a constant
META_AB_SOURCE = """
solve(true, a).
solve((A, B), a) :- solve(A, a), solve(B, a).
solve(A, a) :- clause(A, B), solve(B, a).
"""

FAIL_BODY_SOURCE = """
solve(true).
solve((A, B)) :- solve(A), solve(B).
solve(A) :- fail, clause(A, B), solve(B).
"""

FAIL_TRUE_SOURCE = """
solve(true) :- fail.
solve((A, B)) :- solve(A), solve(B).
solve(A) :- clause(A, B), solve(B).
"""

# Binds a meta-variable in the conjunction clause
AP0_SOURCE = """
solve(true).
solve((A, B)) :- A = p(0), solve(A), solve(B).
solve(A) :- clause(A, B), solve(B).
"""

LOOP_GUARD_SOURCE = """
solve(true).
solve((A, B)) :- fail, solve(A), solve(B).
solve(A) :- loop, clause(A, B), solve(B).

loop :- loop.
"""

# Restricted, but the syntactic conditions cannot show it
FOO_VARIANT_SOURCE = """
solve(true, true).
solve((A, B), (ProofA, ProofB)) :- solve(A, ProofA), solve(B, ProofB).
solve(A, (A :- Proof)) :- clause(A, B), foo(Proof), solve(B, Proof).

foo(_).
"""

# --- Ground representation ---

# Runs a ground-represented program; v(i) become variables in instance_of
IDEMO_SOURCE = """
idemo(P, X, Y) :- instance_of(X, Y), idemo1(P, Y).

idemo1(_, true).
idemo1(P, and(X, Y)) :- idemo1(P, X), idemo1(P, Y).
idemo1(P, not(X)) :- \\+ idemo1(P, X).
idemo1(P, atom(Q, Xs)) :- member(Z, P), instance_of(Z, if(atom(Q, Xs), B)), idemo1(P, B).

instance_of(X, Y) :- inst_formula(X, Y, [], _).

inst_formula(atom(Q, Xs), atom(Q, Ys), S, S1) :- inst_args(Xs, Ys, S, S1).
inst_formula(and(X, Y), and(Z, W), S, S2) :- inst_formula(X, Z, S, S1), inst_formula(Y, W, S1, S2).
inst_formula(if(X, Y), if(Z, W), S, S2) :- inst_formula(X, Z, S, S1), inst_formula(Y, W, S1, S2).
inst_formula(not(X), not(Z), S, S1) :- inst_formula(X, Z, S, S1).
inst_formula(true, true, S, S).

inst_args([], [], S, S).
inst_args([X|Xs], [Y|Ys], S, S2) :- inst_term(X, Y, S, S1), inst_args(Xs, Ys, S1, S2).

inst_term(v(N), X, [], [bind(N, X)]).
inst_term(v(N), X, [bind(N, X)|S], [bind(N, X)|S]).
inst_term(v(N), X, [bind(M, Y)|S], [bind(M, Y)|S1]) :- N \\= M, inst_term(v(N), X, S, S1).
inst_term(term(F, Xs), term(F, Ys), S, S1) :- inst_args(Xs, Ys, S, S1).
inst_term(c(N), c(N), S, S).

member(X, [X|_]).
member(X, [_|T]) :- member(X, T).
"""
