# Copyright 2026 The chirpdd Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Chirped-pulse dynamical decoupling simulator.

All quantities are SI: angular frequencies in rad/s, times in s.
"""

from math import pi

from ._chirpdd import *  # noqa: F401,F403
from ._chirpdd import __doc__  # noqa: F401

MHZ = 2 * pi * 1e6
KHZ = 2 * pi * 1e3
US = 1e-6
NS = 1e-9
