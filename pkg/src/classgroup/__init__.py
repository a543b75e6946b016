"""Binary quadratic form class groups of discriminant -4p."""

from .forms import QuadForm, class_number, compose
from .ranks import ClassData, eight_rank_governing_check, two_power_rank

__all__ = ['QuadForm', 'class_number', 'compose', 'ClassData', 'eight_rank_governing_check', 'two_power_rank']
