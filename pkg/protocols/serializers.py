"""
Serializers for protocol configurations, states and results.

Configuration documents are validated with nested DRF serializers; unknown
keys are rejected at every level and errors are reported as dotted field
paths such as ``params.g_a`` or ``cutoffs.0``.
"""

import io

import numpy as np
from django.conf import settings
from rest_framework import serializers
from rest_framework.exceptions import ParseError
from rest_framework.parsers import JSONParser

from dynamics.evolution import Picture
from dynamics.hamiltonians import HamiltonianLevel
from dynamics.params import DriveParams, LabFrequencies
from hilbert.exceptions import ConfigError, DrivenQEDError
from hilbert.layout import HilbertLayout
from hilbert.states import Ket
from analysis.measurement import MeasurementBasis

from .registry import PROTOCOL_LEVELS, PROTOCOLS, MeasurementStep, get_protocol, outcome_problem
from .runner import ProtocolConfig, ProtocolResult, TimeSpec, summarize

PICTURE_CHOICES = [picture.value for picture in Picture]
LEVEL_CHOICES = [level.value for level in PROTOCOL_LEVELS]
BASIS_CHOICES = [basis.value for basis in MeasurementBasis]


def default_samples():
    return int(getattr(settings, 'DRIVENQED_DEFAULT_SAMPLES', 21))


class StrictSerializer(serializers.Serializer):
    """Serializer that rejects keys it does not declare."""

    def to_internal_value(self, data):
        unknown = sorted(set(data) - set(self.fields)) if isinstance(data, dict) else []
        if not unknown:
            return super().to_internal_value(data)
        # Report unknown keys together with the declared fields' own errors.
        errors = {key: ["Unknown field."] for key in unknown}
        try:
            super().to_internal_value(data)
        except serializers.ValidationError as exc:
            errors.update(exc.detail)
        raise serializers.ValidationError(errors)


class LabFrequenciesSerializer(StrictSerializer):
    """Bare atom, mode and drive frequencies in units of g."""

    omega_atom = serializers.FloatField()
    omega_mode = serializers.FloatField()
    omega_laser = serializers.FloatField()


class DriveParamsSerializer(StrictSerializer):
    """
    Serializer for drive parameters.

    Every field is optional; the protocol supplies the atom count and, for
    two-mode protocols, g_b = g_a and delta_b = 0 unless given.
    """

    n_atoms = serializers.IntegerField(min_value=0, required=False)
    g_a = serializers.FloatField(min_value=0.0, default=1.0)
    omega_drive = serializers.FloatField(min_value=0.0, default=0.0)
    delta_atom = serializers.FloatField(default=0.0)
    delta_a = serializers.FloatField(default=0.0)
    g_b = serializers.FloatField(min_value=0.0, required=False, allow_null=True)
    delta_b = serializers.FloatField(required=False, allow_null=True)
    lab = LabFrequenciesSerializer(required=False, allow_null=True)


class TimeSerializer(StrictSerializer):
    """Sampling window; t_end defaults to the protocol's stop time."""

    t_end = serializers.FloatField(min_value=0.0, required=False)
    samples = serializers.IntegerField(min_value=1, required=False)
    dt = serializers.FloatField(required=False, allow_null=True)

    def validate_dt(self, value):
        """Validate that an explicit step is positive."""
        if value is not None and value <= 0:
            raise serializers.ValidationError("Must be positive.")
        return value


class MeasurementSerializer(StrictSerializer):
    """Atom measurement applied at every sample."""

    atoms = serializers.ListField(child=serializers.IntegerField(min_value=0), min_length=1)
    basis = serializers.ChoiceField(choices=BASIS_CHOICES, default=MeasurementBasis.BARE.value)
    outcome = serializers.CharField()
    picture = serializers.ChoiceField(choices=PICTURE_CHOICES, required=False)

    def validate(self, attrs):
        """Validate that the outcome label fits the measured atoms."""
        problem = outcome_problem(attrs['atoms'], attrs['basis'], attrs['outcome'])
        if problem:
            raise serializers.ValidationError({'outcome': [problem]})
        return attrs


class ProtocolConfigSerializer(StrictSerializer):
    """
    Serializer for a protocol configuration document.

    This serializer fills protocol defaults (cutoffs, level, stop time,
    measurement) and checks the protocol's atom, mode and regime constraints.
    """

    protocol = serializers.ChoiceField(choices=list(PROTOCOLS))
    params = DriveParamsSerializer(required=False)
    cutoffs = serializers.ListField(child=serializers.IntegerField(min_value=1), min_length=1, required=False)
    level = serializers.ChoiceField(choices=LEVEL_CHOICES, required=False)
    time = TimeSerializer(required=False)
    picture = serializers.ChoiceField(choices=PICTURE_CHOICES, default=Picture.INTERACTION.value)
    measurement = MeasurementSerializer(required=False, allow_null=True)

    def _drive_params(self, recipe, data):
        data = dict(data)
        lab = data.pop('lab', None)
        data.setdefault('n_atoms', recipe.n_atoms)
        if recipe.n_modes == 2:
            if data.get('g_b') is None:
                data['g_b'] = data['g_a']
            if data.get('delta_b') is None:
                data['delta_b'] = 0.0
        try:
            return DriveParams(lab_frequencies=LabFrequencies(**lab) if lab else None, **data)
        except DrivenQEDError as exc:
            raise serializers.ValidationError({'params': [str(exc)]})

    def _measurement(self, recipe, attrs, n_atoms):
        if 'measurement' not in attrs:
            return recipe.measurement
        data = attrs['measurement']
        if data is None:
            return None
        if max(data['atoms']) >= n_atoms:
            raise serializers.ValidationError({'measurement.atoms': [f"atom index out of range for {n_atoms} atom(s)"]})
        default_picture = recipe.measurement.picture if recipe.measurement else Picture.INTERACTION
        return MeasurementStep(
            atoms=tuple(data['atoms']),
            basis=data['basis'],
            outcome=data['outcome'],
            picture=data.get('picture', default_picture),
        )

    def validate(self, attrs):
        """Apply protocol defaults and validate protocol constraints."""
        recipe = get_protocol(attrs['protocol'])
        params = self._drive_params(recipe, attrs.get('params', {'g_a': 1.0}))
        cutoffs = attrs.get('cutoffs', recipe.default_cutoffs())
        problems = recipe.validate(params, cutoffs)
        if problems:
            raise serializers.ValidationError({path: [message] for path, message in problems})
        if attrs['picture'] == Picture.LAB.value and params.lab_frequencies is None:
            raise serializers.ValidationError({'picture': ["The lab picture needs params.lab."]})
        timing = attrs.get('time', {})
        attrs['params'] = params
        attrs['cutoffs'] = tuple(cutoffs)
        attrs['level'] = attrs.get('level', recipe.default_level.value)
        attrs['time'] = TimeSpec(
            t_end=timing.get('t_end', recipe.canonical_time(params)),
            samples=timing.get('samples', default_samples()),
            dt=timing.get('dt'),
        )
        attrs['measurement'] = self._measurement(recipe, attrs, params.n_atoms)
        return attrs

    def create(self, validated_data):
        """Build the ProtocolConfig."""
        return ProtocolConfig(
            protocol=validated_data['protocol'],
            params=validated_data['params'],
            cutoffs=validated_data['cutoffs'],
            level=HamiltonianLevel(validated_data['level']),
            time=validated_data['time'],
            picture=Picture(validated_data['picture']),
            measurement=validated_data['measurement'],
        )


def flatten_errors(errors, prefix=''):
    """Turn nested serializer errors into ``"path: message"`` strings."""
    if isinstance(errors, dict):
        items = errors.items()
    elif isinstance(errors, list) and any(isinstance(item, (dict, list)) for item in errors):
        items = enumerate(errors)
    else:
        messages = errors if isinstance(errors, list) else [errors]
        return [f"{prefix or 'document'}: {message}" for message in messages]
    flattened = []
    for key, value in items:
        path = str(key) if key != 'non_field_errors' else ''
        flattened.extend(flatten_errors(value, f"{prefix}.{path}" if prefix and path else prefix or path))
    return flattened


def config_from_dict(data):
    """Validate a decoded configuration document."""
    if not isinstance(data, dict):
        raise ConfigError(["document: expected a JSON object"])
    serializer = ProtocolConfigSerializer(data=data)
    if not serializer.is_valid():
        raise ConfigError(flatten_errors(serializer.errors))
    return serializer.save()


def parse_config(text):
    """
    Parse and validate a JSON configuration document.

    Args:
        text: UTF-8 JSON text

    Returns:
        ProtocolConfig with defaults applied

    Raises:
        ConfigError: listing every violation as ``field.path: message``
    """
    try:
        data = JSONParser().parse(io.BytesIO(text.encode('utf-8')))
    except ParseError as exc:
        raise ConfigError([f"document: {exc.detail}"])
    return config_from_dict(data)


def config_to_dict(config):
    """Echo a ProtocolConfig as a document that parses back to the same config."""
    params = config.params
    lab = params.lab_frequencies
    measurement = config.measurement
    return {
        'protocol': config.protocol,
        'params': {
            'n_atoms': params.n_atoms,
            'g_a': params.g_a,
            'omega_drive': params.omega_drive,
            'delta_atom': params.delta_atom,
            'delta_a': params.delta_a,
            'g_b': params.g_b,
            'delta_b': params.delta_b,
            'lab': None if lab is None else {
                'omega_atom': lab.omega_atom,
                'omega_mode': lab.omega_mode,
                'omega_laser': lab.omega_laser,
            },
        },
        'cutoffs': list(config.cutoffs),
        'level': config.level.value,
        'time': {'t_end': config.time.t_end, 'samples': config.time.samples, 'dt': config.time.dt},
        'picture': config.picture.value,
        'measurement': None if measurement is None else {
            'atoms': list(measurement.atoms),
            'basis': measurement.basis.value,
            'outcome': measurement.outcome,
            'picture': measurement.picture.value,
        },
    }


class StateSerializer(StrictSerializer):
    """
    Serializer for a state vector.

    ``re`` and ``im`` are full-length amplitude arrays in layout order.
    """

    layout = serializers.ListField(child=serializers.DictField(), min_length=1)
    re = serializers.ListField(child=serializers.FloatField())
    im = serializers.ListField(child=serializers.FloatField())

    def validate(self, attrs):
        """Validate the layout description and the amplitude lengths."""
        try:
            layout = HilbertLayout.from_description(attrs['layout'])
        except (DrivenQEDError, KeyError, TypeError, ValueError) as exc:
            raise serializers.ValidationError({'layout': [str(exc)]})
        if len(attrs['re']) != layout.dim or len(attrs['im']) != layout.dim:
            raise serializers.ValidationError(
                f"Expected {layout.dim} amplitudes, got {len(attrs['re'])} real and {len(attrs['im'])} imaginary"
            )
        attrs['layout'] = layout
        return attrs


def state_to_dict(psi):
    return {
        'layout': psi.layout.describe(),
        're': [float(value) for value in psi.amplitudes.real],
        'im': [float(value) for value in psi.amplitudes.imag],
    }


def state_from_dict(data):
    """Rebuild a normalized Ket from ``state_to_dict`` output."""
    serializer = StateSerializer(data=data)
    if not serializer.is_valid():
        raise ConfigError(flatten_errors(serializer.errors, 'state'))
    attrs = serializer.validated_data
    amplitudes = np.array(attrs['re'], dtype=float) + 1j * np.array(attrs['im'], dtype=float)
    return Ket(attrs['layout'], amplitudes)


def result_to_dict(result):
    return {
        'tool': 'drivenqed',
        'version': result.version,
        'protocol': result.protocol,
        'config': result.config,
        'times': list(result.times),
        'metrics': result.metrics,
        'summary': result.summary,
        'states': [{'t': t, 'state': state_to_dict(psi)} for t, psi in result.states],
    }


def result_from_dict(data):
    """Rebuild a ProtocolResult written by ``result_to_dict``."""
    try:
        states = [(float(item['t']), state_from_dict(item['state'])) for item in data['states']]
        result = ProtocolResult(
            protocol=data['protocol'],
            config=data['config'],
            times=[float(t) for t in data['times']],
            states=states,
            metrics=data['metrics'],
            summary=data.get('summary', {}),
            version=data.get('version', ''),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError([f"result: missing or malformed entry {exc}"])
    if not result.summary and result.times:
        result.summary = summarize(result)
    return result
