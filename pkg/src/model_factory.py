from src.models.coop_model import CoopModel
from src.models.cubic_model import CubicModel
from src.models.fisher_model import FisherModel


class ModelFactory:
    kind_to_model = {
        'coop': CoopModel,
        'fisher': FisherModel,
        'cubic': CubicModel,
    }

    @staticmethod
    def create_model(params):
        model_class = ModelFactory.kind_to_model.get(params.kind)
        if model_class is None:
            raise ValueError(f'unknown model kind: {params.kind}')

        return model_class(params)
