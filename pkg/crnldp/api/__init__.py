#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Package API
"""

from .routes import api_bp

__all__ = ['api_bp']