import random

import pytest

from planar_descent.gaussian import GaussianRational, gq
from planar_descent.descent import (
    NotACocycleError,
    descends_real,
    element_order,
    fom_real,
    hilbert90_split,
    normalizer,
    real_model_check,
)
from planar_descent.equivalence import NeedsReductionError
from planar_descent.plane import (
    PointConfig,
    ProjPoint,
    SemiProjMap,
    adjugate3,
    conj_matrix,
    det3,
    matmul3,
)


def pt(a, b, c):
    return ProjPoint(gq(a), gq(b), gq(c))


M = SemiProjMap(((-1, 0, 0), (0, -1, 0), (0, 0, 1)))
J = SemiProjMap(((0, -1, 0), (1, 0, 0), (0, 0, 1)))
STANDARD_FRAME = PointConfig([pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1), pt(1, 1, 1)])


def _paper_family(a_values, origin=False):
    points = [pt(1, 0, 1), pt(-1, 0, 1), pt(0, 1, 1), pt(0, -1, 1)]
    for a in a_values:
        a = gq(a)
        points.append(ProjPoint(a, gq(1), gq(0)))
        points.append(ProjPoint(gq(1), -a.conj(), gq(0)))
    if origin:
        points.append(pt(0, 0, 1))
    return PointConfig(points)


def _random_twist(rng):
    while True:
        rows = tuple(
            tuple(GaussianRational(rng.randint(-3, 3), rng.randint(-3, 3))
                  for _ in range(3))
            for _ in range(3)
        )
        if any(x for row in rows for x in row) and det3(rows):
            return SemiProjMap(rows)


# --- normalizer --------------------------------------------------------------------


def test_paper_normalizer_is_c4():
    group = normalizer(_paper_family(["2+1i"]))
    assert group.order == 4
    assert group.structure == "C4"
    assert group.order_profile == (1, 2, 4, 4)
    keys = {g.key() for g in group.elements}
    assert SemiProjMap.identity().key() in keys
    assert M.key() in keys
    assert SemiProjMap(J.matrix, antiholo=True).key() in keys
    mj = SemiProjMap(matmul3(M.matrix, J.matrix), antiholo=True)
    assert mj.key() in keys


def test_normalizer_of_stable_frame_set():
    group = normalizer(STANDARD_FRAME)
    assert group.order == 48
    assert len(group.holomorphic) == 24
    assert len(group.antiholomorphic) == 24
    identity_anti = SemiProjMap.identity().matrix
    assert any(g.matrix == identity_anti for g in group.antiholomorphic)
    assert group.structure == "other"


def test_normalizer_empty_antiholomorphic_part():
    # a frame plus a complex point on the line through the first two base
    # points: the conjugate configuration is inequivalent
    config = PointConfig([pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1), pt(1, 1, 1),
                          pt(1, "2+1i", 0)])
    group = normalizer(config)
    assert group.antiholomorphic == ()
    assert group.order == len(group.holomorphic)


def test_normalizer_degenerate_raises():
    config = PointConfig([pt(k, 1, 0) for k in range(4)])
    with pytest.raises(NeedsReductionError):
        normalizer(config)


def test_element_order():
    assert element_order(SemiProjMap.identity()) == 1
    assert element_order(M) == 2
    assert element_order(SemiProjMap(J.matrix, antiholo=True)) == 4


def test_structure_tags_cover_small_groups():
    # C2x C2: a conjugation-stable frame-plus-point set
    stable = PointConfig([pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1), pt(1, 1, 1),
                          pt(2, 3, 1)])
    group = normalizer(stable)
    assert group.structure == "C2xC2" and group.order_profile == (1, 2, 2, 2)

    # C2: no antiholomorphic symmetries, one nontrivial automorphism
    lopsided = PointConfig([pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1), pt(1, 1, 1),
                            pt(1, "2+1i", 0)])
    group = normalizer(lopsided)
    assert group.structure == "C2" and group.antiholomorphic == ()

    # trivial: no symmetries at all
    rigid = PointConfig([pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1), pt(1, 1, 1),
                         pt(2, 3, 1), pt(1, "2+1i", 0)])
    group = normalizer(rigid)
    assert group.structure == "trivial" and group.order == 1


# --- field-of-moduli test ------------------------------------------------------------


def test_fom_paper_family_witness_is_j():
    verdict, witness = fom_real(_paper_family(["2+1i"]))
    assert verdict
    assert witness.antiholo
    assert witness.matrix == J.matrix


def test_fom_conjugation_stable_witness_identity():
    verdict, witness = fom_real(STANDARD_FRAME)
    assert verdict
    assert witness.antiholo
    assert witness.matrix == SemiProjMap.identity().matrix


def test_fom_false_frame_case():
    config = PointConfig([pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1), pt(1, 1, 1),
                          pt(1, "2+1i", 0)])
    verdict, witness = fom_real(config)
    assert not verdict and witness is None


def test_fom_frame_plus_interior_point_matches_exhaustion():
    # frame plus (2+1i:1:1); decided by the complete enumeration, and the
    # enumeration says the conjugate point is not reachable
    config = PointConfig([pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1), pt(1, 1, 1),
                          pt("2+1i", 1, 1)])
    from planar_descent.equivalence import equivalences

    verdict, _ = fom_real(config)
    assert verdict == bool(equivalences(config.conj(), config))
    assert not verdict


def test_fom_witness_carries_conjugate_onto_input():
    rng = random.Random(31)
    from planar_descent.families import random_real_stable_config

    for size in (2, 4, 5):
        for _ in range(5):
            stable = random_real_stable_config(rng, size)
            config = _random_twist(rng).apply(stable)
            verdict, witness = fom_real(config)
            assert verdict
            holo = SemiProjMap(witness.matrix)
            assert holo.apply(config.conj()) == config


# --- Hilbert 90 ---------------------------------------------------------------------


def test_split_identity_gives_identity():
    assert hilbert90_split(SemiProjMap.identity().matrix) == SemiProjMap.identity().matrix


def test_split_half_turn():
    b = hilbert90_split(M.matrix)
    # B conj(B)^-1 must equal M projectively; diag(i, i, 1) is one witness
    recovered = SemiProjMap(matmul3(b, adjugate3(conj_matrix(b))))
    assert recovered == M
    diag_i = ((gq("0+1i"), gq(0), gq(0)), (gq(0), gq("0+1i"), gq(0)),
              (gq(0), gq(0), gq(1)))
    check = SemiProjMap(matmul3(diag_i, adjugate3(conj_matrix(diag_i))))
    assert check == M


def test_split_rejects_non_cocycle():
    with pytest.raises(NotACocycleError):
        hilbert90_split(J.matrix)


def test_split_random_exact_cocycles():
    rng = random.Random(32)
    for _ in range(25):
        b = _random_twist(rng)
        cocycle = matmul3(b.matrix, adjugate3(conj_matrix(b.matrix)))
        split = hilbert90_split(cocycle, seed=5)
        recovered = SemiProjMap(matmul3(split, adjugate3(conj_matrix(split))))
        assert recovered == SemiProjMap(cocycle)


def test_split_deterministic_under_seed():
    b = _random_twist(random.Random(33))
    cocycle = matmul3(b.matrix, adjugate3(conj_matrix(b.matrix)))
    assert hilbert90_split(cocycle, seed=9) == hilbert90_split(cocycle, seed=9)


# --- descent -------------------------------------------------------------------------


def test_paper_family_never_descends():
    for origin in (False, True):
        config = _paper_family(["2+1i"], origin)
        cert = descends_real(config)
        assert cert.fom_real and not cert.descends
        assert cert.real_model is None and cert.splitter is None
        assert len(cert.refutation) == 2
        for element, square in cert.refutation:
            assert element.antiholo and not square.antiholo
            assert square == M


def test_conjugation_stable_descends_trivially():
    cert = descends_real(STANDARD_FRAME)
    assert cert.descends
    assert cert.splitter == SemiProjMap.identity()
    assert cert.real_model == STANDARD_FRAME
    assert real_model_check(STANDARD_FRAME, cert) == (True, None)


def test_fom_false_certificate_has_empty_refutation():
    config = PointConfig([pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1), pt(1, 1, 1),
                          pt(1, "2+1i", 0)])
    cert = descends_real(config)
    assert not cert.fom_real and not cert.descends
    assert cert.refutation == ()


def test_random_twists_descend_with_equivalent_model():
    rng = random.Random(34)
    from planar_descent.families import random_real_stable_config
    from planar_descent.equivalence import equivalences, NeedsReductionError

    for size in (1, 2, 3, 4, 5):
        for _ in range(6):
            stable = random_real_stable_config(rng, size)
            config = _random_twist(rng).apply(stable)
            cert = descends_real(config, seed=3)
            assert cert.descends, f"size {size} twist failed to descend"
            ok, reason = real_model_check(config, cert)
            assert ok, reason
            try:
                assert equivalences(cert.real_model, config)
            except NeedsReductionError:
                pass


def test_descent_certificate_round_trip_tampering():
    config = _random_twist(random.Random(35)).apply(STANDARD_FRAME)
    cert = descends_real(config)
    assert cert.descends
    assert real_model_check(config, cert) == (True, None)

    tampered_model = PointConfig(
        list(cert.real_model)[:-1] + [pt("3+1i", 1, 1)]
    )
    bad_model = type(cert)(
        fom_real=cert.fom_real, fom_witness=cert.fom_witness, descends=True,
        real_model=tampered_model, splitter=cert.splitter, cocycle=cert.cocycle,
        refutation=(), route=cert.route,
    )
    ok, reason = real_model_check(config, bad_model)
    assert not ok and reason == "conj-instability"

    rogue = _random_twist(random.Random(36))
    bad_splitter = type(cert)(
        fom_real=cert.fom_real, fom_witness=cert.fom_witness, descends=True,
        real_model=cert.real_model, splitter=rogue, cocycle=cert.cocycle,
        refutation=(), route=cert.route,
    )
    ok, reason = real_model_check(config, bad_splitter)
    assert not ok and reason == "cocycle-mismatch"


def test_real_model_check_requires_positive_certificate():
    cert = descends_real(_paper_family(["2+1i"]))
    with pytest.raises(Exception):
        real_model_check(_paper_family(["2+1i"]), cert)


def test_descent_verdict_matches_exhaustive_involution_search():
    # for frame configurations: descends iff some antiholomorphic coset
    # element squares to the identity, and a negative verdict lists the
    # whole coset
    from planar_descent.equivalence import equivalences
    from planar_descent.families import random_real_stable_config

    rng = random.Random(38)
    cases = [_paper_family(["2+1i"]), _paper_family(["2+1i"], origin=True),
             STANDARD_FRAME]
    for _ in range(6):
        stable = random_real_stable_config(rng, 5)
        cases.append(_random_twist(rng).apply(stable))
    cases.append(PointConfig([pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1),
                              pt(1, 1, 1), pt(1, "2+1i", 0)]))
    for config in cases:
        try:
            anti = [SemiProjMap(m.matrix, antiholo=True)
                    for m in equivalences(config.conj(), config)]
        except NeedsReductionError:
            continue
        cert = descends_real(config)
        exhaustive = any((tau * tau).is_identity() for tau in anti)
        assert cert.descends == exhaustive
        if cert.fom_real and not cert.descends:
            from planar_descent.equivalence import aut_group

            assert len(cert.refutation) == len(aut_group(config))


def test_antiholomorphic_coset_is_a_left_translate():
    group = normalizer(_paper_family(["2+1i"]))
    anti = group.antiholomorphic
    first = anti[0]
    translated = {(first * h).key() for h in group.holomorphic}
    assert translated == {g.key() for g in anti}


def test_collinear_complex_configurations():
    # twisted collinear sets take the line route and still produce models
    rng = random.Random(37)
    from planar_descent.families import random_real_stable_config

    count = 0
    while count < 8:
        stable = random_real_stable_config(rng, 4)
        from planar_descent.equivalence import classify, ConfigTag

        if classify(stable).tag is not ConfigTag.COLLINEAR:
            continue
        config = _random_twist(rng).apply(stable)
        cert = descends_real(config, seed=11)
        assert cert.descends and cert.route == "line"
        assert real_model_check(config, cert) == (True, None)
        count += 1


def test_collinear_without_real_form():
    # four collinear points whose cross-ratio is not real and not carried
    # to its conjugate by any symmetry: the conjugate set is inequivalent
    config = PointConfig([
        pt(0, 1, 0), pt(1, 1, 0), pt(1, 0, 0), pt("2+3i", 1, 0),
    ])
    verdict, witness = fom_real(config)
    cert = descends_real(config)
    assert verdict == cert.fom_real
    if not verdict:
        assert not cert.descends and cert.refutation == ()


def test_line_route_uses_whole_coset_not_first_candidate():
    # pairs {z, 3/conj(z)}: the obvious symmetry z -> 3/conj(z) squares
    # to 3*I and 3 is not a sum of two squares, but with four points the
    # coset holds another symmetry that splits
    config = PointConfig([
        pt("1+1i", 1, 0), pt("3/2+3/2i", 1, 0), pt(3, 1, 0), pt(1, 1, 0),
    ])
    cert = descends_real(config)
    assert cert.descends and cert.route == "line"
    assert real_model_check(config, cert) == (True, None)


def test_line_route_model_outside_coordinate_field_is_reported():
    # same pair shape with six points: every candidate either fails to
    # square to a scalar or squares to a positive non-norm, so a real
    # model exists over the reals but not with Q(i) coordinates
    from planar_descent.descent import IrrationalModelError

    config = PointConfig([
        pt("1+1i", 1, 0), pt("3/2+3/2i", 1, 0),
        pt(2, 1, 0), pt("3/2", 1, 0),
        pt(5, 1, 0), pt("3/5", 1, 0),
    ])
    with pytest.raises(IrrationalModelError):
        descends_real(config)


def test_line_refutation_on_anisotropic_six_points():
    # pairs {z, -1/conj(z)} on one line: stable under the conjugation
    # z -> -1/conj(z), whose matrix squares to -I; the set is equivalent
    # to its conjugate yet has no real form on the line, hence none in
    # the plane either
    config = PointConfig([
        pt("1+1i", 1, 0), pt("-1/2-1/2i", 1, 0),
        pt(2, 1, 0), pt("-1/2", 1, 0),
        pt("0+3i", 1, 0), pt("0-1/3i", 1, 0),
    ])
    cert = descends_real(config)
    assert cert.fom_real
    assert not cert.descends
    assert cert.route == "line"
    assert len(cert.refutation) == 1
    for element, square in cert.refutation:
        assert element.antiholo
        assert not square.is_identity()
        assert element.apply(config) == config
