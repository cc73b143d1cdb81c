# -*- coding: utf-8 -*-
"""
    maglab
    ~~~~~~

    Magnitude and maximum diversity of finite metric spaces.
"""
__version__ = '0.1.0'
