"""Smoke test for the gcat_py extension module."""
import json

import gcat_py as g


def main():
    s3 = g.Group.by_name("S3")
    assert s3.order() == 6
    assert len(s3.subgroups()) == 6
    assert s3.orbit_category().num_objects() == 6

    arrow = g.Category.chain(1)
    x = g.GCategory.tensor(s3, ["e"], arrow)
    assert x.base().num_objects() == 12
    assert x.fixed_points(s3.elements()).num_objects() == 0
    assert g.GCategory.from_json(x.to_json()).base() == x.base()

    a = g.Category.discrete(["a"])
    b = g.Category.poset(["a", "b"], [("a", "b")])
    i = g.Functor.inclusion(a, b)
    assert i.is_dwyer()
    f = g.Functor.constant(a, g.Category.chain(0), "0")
    p, _, from_b = g.pushout(i, f)
    q, _, _ = g.pushout_presented(i, f)
    assert (p.num_objects(), p.num_morphisms()) == (q.num_objects(), q.num_morphisms()) == (2, 3)
    assert from_b.target() == p

    circle = g.SSet.standard("boundary", 2)
    assert circle.counts()[:2] == [3, 3]
    degrees = {d: (betti, torsion) for d, betti, torsion in circle.sd().categorify().nerve(3).homology()}
    assert degrees[0] == (1, []) and degrees[1] == (1, []), degrees

    report = json.loads(g.verify("pushout-explicit", seed=42, cases=5))
    assert report["passed"] == 5, report

    try:
        g.Category.from_json("{}")
    except ValueError:
        pass
    else:
        raise AssertionError("bad manifest accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
