# pylint: disable = unused-import, reimported, import-error

import jsonschema
import pandas
import pytest
import toml
import tqdm

import numpy
import scipy
import scipy.special
