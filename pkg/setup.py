"""
MCWC Toolkit Setup Script
Prepares .env, the results directory and the package dependencies, then
runs the module smoke checks
"""
import os
import shutil
import subprocess
import sys

REFERENCE_TABLE = os.path.join('backend', 'data', 'reference_values.csv')


def check_python_version():
    if sys.version_info < (3, 9):
        print(f"❌ Python 3.9+ required, found {sys.version.split()[0]}")
        sys.exit(1)
    print(f"✅ Python {sys.version.split()[0]}")


def prepare_env_file():
    """Copy .env.example to .env unless a local configuration exists"""
    if os.path.exists('.env'):
        print("✅ Using existing .env")
        return
    if not os.path.exists('.env.example'):
        print("❌ .env.example is missing; MCWC_* defaults will apply")
        return
    shutil.copyfile('.env.example', '.env')
    print("📄 .env created from .env.example (MCWC_NODE_BUDGET, MCWC_VERTEX_CAP, ...)")


def check_reference_table():
    """The bounds table needs the shipped A(n,d,w) / A_q(n,d) / B(n,d) baseline"""
    if not os.path.exists(REFERENCE_TABLE):
        print(f"❌ {REFERENCE_TABLE} not found; 'table' and 'bound' will lack baseline values")
        return False
    with open(REFERENCE_TABLE) as fh:
        rows = sum(1 for line in fh if line.strip() and not line.startswith(('#', 'kind,')))
    print(f"✅ Reference table: {rows} values")
    return True


def install_dependencies():
    print("\n📦 Installing flask, numpy, pandas, python-dotenv, pytest...")
    try:
        subprocess.check_call([sys.executable, "-m", "pip", "install", "-r", "requirements.txt"])
    except subprocess.CalledProcessError as e:
        print(f"❌ pip failed: {e}")
        sys.exit(1)


def run_smoke_checks():
    """Run test_modules.py; returns True when every module check passed"""
    print("\n🧪 Running module smoke checks...")
    return subprocess.call([sys.executable, "test_modules.py"]) == 0


def main():
    print("🧮 MCWC Toolkit - Setup")
    print("=" * 50)

    check_python_version()
    os.makedirs('results', exist_ok=True)
    prepare_env_file()
    check_reference_table()

    if input("\n📦 Install dependencies now? (y/n): ").lower() == 'y':
        install_dependencies()
        if not run_smoke_checks():
            print("⚠️  Some module checks failed; see the output above")
    else:
        print("⚠️  Skipped. Run 'pip install -r requirements.txt' when ready.")

    print("\n" + "=" * 50)
    print("📝 Try:")
    print("   cd backend && python cli.py bound --m 2 --n 4 --d 4 --w 2 --exact")
    print("   cd backend && python cli.py --out ../results/curves.csv curves")
    print("   pytest -m 'not slow'")


def package():
    """Packaging entry point used when setuptools drives this file (pip install)"""
    from setuptools import setup
    setup(
        name='mcwc-toolkit',
        version='0.1.0',
        python_requires='>=3.9',
        package_dir={'': 'backend'},
        packages=['modules', 'routes'],
        py_modules=['app', 'cli'],
        install_requires=[
            'flask>=3.0',
            'flask-cors>=4.0',
            'numpy>=1.24.0',
            'pandas>=2.1.0',
            'python-dotenv>=1.0',
        ],
    )


if __name__ == "__main__":
    if len(sys.argv) > 1:
        package()
    else:
        main()
