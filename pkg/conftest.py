"""Shared pytest setup: backend/ on sys.path, as the modules import each other from there"""
import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), 'backend'))


@pytest.fixture(scope='session')
def references():
    from modules.tabulator import ReferenceValues
    return ReferenceValues.from_csv()


@pytest.fixture
def client():
    from app import create_app
    app = create_app()
    app.config['TESTING'] = True
    return app.test_client()
