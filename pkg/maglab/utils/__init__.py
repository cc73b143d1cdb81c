#-*- coding: utf-8 -*-
