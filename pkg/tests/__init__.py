# flake8: noqa
import pytest
