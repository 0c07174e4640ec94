"""
Smoke checks for the MCWC Toolkit
Run this to verify all modules are working (also collected by pytest)
"""
import sys
import os

# Add backend to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'backend'))


def test_field_module():
    """GF(4) arithmetic"""
    print("\n🧪 Testing Finite Field Module...")
    from modules.gf import field_make, field_element, field_mul, field_inv, field_one

    f = field_make(2, 2)
    a = field_element(f, 2)
    assert field_mul(a, field_inv(a, f), f) == field_one(f)
    print(f"✅ GF({f.q}) working, modulus {f.modulus}")


def test_construction_module():
    """Pseudo-product of the two builtin ingredients"""
    print("\n🧪 Testing Construction Module...")
    from modules import catalog
    from modules.constructions import pseudo_product

    result = pseudo_product(catalog.builtin('cwc-4-2-2'), catalog.builtin('lin-6-2-4'))
    assert result.size == 16 and result.verified_distance >= 8
    print(f"✅ {result.provenance}: {result.size} words")


def test_bound_module():
    """Johnson bound on M(2,4,4,2)"""
    print("\n🧪 Testing Bound Module...")
    from modules.bounds import johnson_homogeneous

    record = johnson_homogeneous(2, 4, 4, 2)
    assert record.value == 12
    print(f"✅ M(2,4,4,2) <= {record.value} via {record.provenance}")


def test_asymptotics_module():
    """Curves at delta = 0.1"""
    print("\n🧪 Testing Asymptotics Module...")
    from modules.asymptotics import emit_curves, ordering_violations

    frame = emit_curves([0.1])
    assert not ordering_violations(frame)
    print(f"✅ {len(frame)} curve points, ordering holds")


def test_puf_module():
    """Zero mean difference on an MCWC"""
    print("\n🧪 Testing PUF Simulator Module...")
    from modules import catalog
    from modules.puf_sim import device_new, deterministic_difference

    code = catalog.builtin('cwc-4-2-2')
    dev = device_new(1, 4, (1.0, 1.3), 0.01, seed=7)
    assert all(deterministic_difference(dev, u, v) == 0.0 for u in code.words for v in code.words)
    print("✅ PUF simulator working, deterministic differences vanish")


def main():
    print("=" * 60)
    print("🧮 MCWC Toolkit - Module Testing")
    print("=" * 60)

    checks = [
        ("Finite Fields", test_field_module),
        ("Constructions", test_construction_module),
        ("Bounds", test_bound_module),
        ("Asymptotics", test_asymptotics_module),
        ("PUF Simulator", test_puf_module),
    ]
    results = []
    for name, check in checks:
        try:
            check()
            results.append((name, True))
        except Exception as e:
            print(f"❌ Error: {e}")
            results.append((name, False))

    # Summary
    print("\n" + "=" * 60)
    print("📊 Test Summary")
    print("=" * 60)

    for name, passed in results:
        status = "✅ PASS" if passed else "❌ FAIL"
        print(f"{name:25} {status}")

    total = len(results)
    passed = sum(1 for _, p in results if p)

    print(f"\nTotal: {passed}/{total} modules working")

    if passed == total:
        print("\n🎉 All modules are working correctly!")
    else:
        print("\n⚠️  Some modules need attention. Check errors above.")
    print("=" * 60)
    return passed == total


if __name__ == "__main__":
    sys.exit(0 if main() else 1)
