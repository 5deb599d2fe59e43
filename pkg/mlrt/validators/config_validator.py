"""
Experiment configuration validation.
Validates the JSON document (after flag overrides) fed to the command-line front end.
"""

from typing import Any, Dict

from mlrt.exceptions import ValidationError
from mlrt.models.experiment import GAMMA_AUTO_BAYES, GAMMA_AUTO_STEIN, OUTPUT_FORMATS

from .base_validator import BaseValidator


class ExperimentConfigValidator(BaseValidator):
    """Validator for experiment configuration documents."""

    VECTOR_FIELDS = ['p1', 'p2', 'p_hat1', 'p_hat2']
    KNOWN_FIELDS = VECTOR_FIELDS + ['gamma', 'radii', 'epsilon', 'n_list', 'seed', 'trials',
                                    'scan_points', 'output_format']
    GAMMA_KEYWORDS = [GAMMA_AUTO_BAYES, GAMMA_AUTO_STEIN]
    MIN_TRIALS = 100
    MIN_SCAN_POINTS = 3

    def validate(self, data: Dict[str, Any]) -> None:
        """
        Validate experiment configuration.

        Args:
            data: Parsed configuration document

        Raises:
            ValidationError: On the first offending field
        """
        if not isinstance(data, dict):
            raise ValidationError("configuration must be a JSON object")

        for key in data:
            if key not in self.KNOWN_FIELDS:
                raise ValidationError(f"Unknown configuration field: {key}", field=key)

        sizes = {}
        for field in self.VECTOR_FIELDS:
            if data.get(field) is not None:
                self.validate_probability_vector(data[field], field)
                sizes[field] = len(data[field])
        if len(set(sizes.values())) > 1:
            field = sorted(sizes)[-1]
            raise ValidationError(f"alphabet size mismatch: {sizes}", field=field,
                                  value=sizes[field])

        if 'gamma' in data:
            self.validate_gamma(data['gamma'])
        if 'radii' in data:
            self.validate_radii(data['radii'])
        if 'epsilon' in data:
            self.validate_numeric_range(data['epsilon'], 'epsilon', 0.0, 0.5, exclusive=True)
        if 'n_list' in data:
            self.validate_n_list(data['n_list'])
        if 'seed' in data:
            self.validate_positive_int(data['seed'], 'seed', min_value=0)
            if data['seed'] >= 2 ** 64:
                raise ValidationError("Field 'seed' must fit in 64 bits", field='seed',
                                      value=data['seed'])
        if 'trials' in data:
            self.validate_positive_int(data['trials'], 'trials', min_value=0)
            if 0 < data['trials'] < self.MIN_TRIALS:
                raise ValidationError(f"Field 'trials' must be 0 or at least {self.MIN_TRIALS}",
                                      field='trials', value=data['trials'])
        if 'scan_points' in data:
            self.validate_positive_int(data['scan_points'], 'scan_points',
                                       min_value=self.MIN_SCAN_POINTS)
        if 'output_format' in data:
            self.validate_choice(data['output_format'], 'output_format', list(OUTPUT_FORMATS))

    def validate_gamma(self, gamma: Any) -> None:
        """Threshold is a number or one of the automatic keywords."""
        if isinstance(gamma, str):
            self.validate_choice(gamma, 'gamma', self.GAMMA_KEYWORDS)
        else:
            self.validate_numeric_range(gamma, 'gamma')

    def validate_radii(self, radii: Any) -> None:
        """Radii are nonnegative and ascending."""
        if not isinstance(radii, list):
            raise ValidationError("Field 'radii' must be a list", field='radii', value=radii)
        for r in radii:
            self.validate_numeric_range(r, 'radii', min_value=0.0)
        if any(b < a for a, b in zip(radii, radii[1:])):
            raise ValidationError("Field 'radii' must be ascending", field='radii', value=radii)

    def validate_n_list(self, n_list: Any) -> None:
        if not isinstance(n_list, list) or not n_list:
            raise ValidationError("Field 'n_list' must be a non-empty list", field='n_list',
                                  value=n_list)
        for n in n_list:
            self.validate_positive_int(n, 'n_list')
