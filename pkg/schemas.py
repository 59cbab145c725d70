from marshmallow import Schema, ValidationError, fields, validate, validates_schema

FAULTS = ('eta_to_front', 'baues_sign', 'twisting_swap', 'boundary_sign')


class SimplicialGeneratorSchema(Schema):
    name = fields.Str(required=True, validate=validate.Length(min=1))
    dim = fields.Int(required=True, validate=validate.Range(min=0))
    faces = fields.List(fields.Str(), load_default=list)

    @validates_schema
    def validate_faces(self, data, **kwargs):
        expected = data['dim'] + 1 if data['dim'] > 0 else 0
        if len(data['faces']) != expected:
            raise ValidationError(f"{data['name']} needs {expected} faces", 'faces')


class SimplicialSetSchema(Schema):
    name = fields.Str(load_default='space')
    generators = fields.List(fields.Nested(SimplicialGeneratorSchema), required=True)


class AlgebraGeneratorSchema(Schema):
    label = fields.Str(required=True, validate=validate.Regexp(r'^[A-Za-z]\w*$'))
    degree = fields.Int(required=True, validate=validate.Range(min=1))


class AlgebraSpecSchema(Schema):
    """Free graded commutative algebra on the listed generators"""
    name = fields.Str(load_default='S(U)')
    generators = fields.List(fields.Nested(AlgebraGeneratorSchema), required=True)


class FnSetElementSchema(Schema):
    label = fields.Str(required=True)
    m = fields.Int(required=True, validate=validate.Range(min=0))
    n = fields.Int(required=True, validate=validate.Range(min=0))
    degenerate = fields.Bool(load_default=False)


class FnSetSchema(Schema):
    name = fields.Str(load_default='table')
    elements = fields.List(fields.Nested(FnSetElementSchema), required=True)
    d0 = fields.Dict(keys=fields.Str(), values=fields.List(fields.Str()), load_default=dict)
    d1 = fields.Dict(keys=fields.Str(), values=fields.List(fields.Str()), load_default=dict)
    d2 = fields.Dict(keys=fields.Str(), values=fields.List(fields.Str()), load_default=dict)
    eta = fields.Dict(keys=fields.Str(), values=fields.List(fields.Str()), load_default=dict)


class ChainComplexSchema(Schema):
    ring = fields.Str(load_default='Z')
    cohomological = fields.Bool(load_default=False)
    degrees = fields.Dict(keys=fields.Str(), values=fields.List(fields.Str()), required=True)
    differentials = fields.Dict(keys=fields.Str(), values=fields.List(fields.List(fields.Int())), load_default=dict)


class SuiteConfigSchema(Schema):
    ring = fields.Str(load_default=None, allow_none=True)
    bound = fields.Int(load_default=None, allow_none=True, validate=validate.Range(min=0, max=12))
    seed = fields.Int(load_default=None, allow_none=True)
    checks = fields.List(fields.Str(), load_default=None, allow_none=True)
    spaces = fields.List(fields.Str(), load_default=None, allow_none=True)
    faults = fields.List(fields.Str(validate=validate.OneOf(FAULTS)), load_default=list)


class HomologyGroupSchema(Schema):
    degree = fields.Int()
    rank = fields.Int()
    torsion = fields.List(fields.Int())


class HomologySummarySchema(Schema):
    ring = fields.Function(lambda obj: str(obj.ring))
    groups = fields.List(fields.Nested(HomologyGroupSchema))


class CertificateSchema(Schema):
    name = fields.Str()
    params = fields.Dict()
    verdict = fields.Str()
    witnesses = fields.List(fields.Raw())
    details = fields.Dict()
    duration = fields.Function(lambda obj: round(obj.duration or 0.0, 3))


class RingPresentationSchema(Schema):
    ring = fields.Function(lambda obj: str(obj.ring))
    bound = fields.Int()
    poincare = fields.Function(lambda obj: [obj.poincare.get(k, 0) for k in range(obj.bound + 1)])
    torsion = fields.Function(lambda obj: {str(k): v for k, v in sorted(obj.torsion.items()) if v})
    generators = fields.List(fields.Raw())
    basis = fields.Function(lambda obj: {str(k): v for k, v in sorted(obj.basis.items())})
    products = fields.List(fields.Raw())
    flags = fields.Dict()
