"""Reference predictions for MinMaxScaler -> 3-NN, used as a frozen test oracle."""
import numpy as np
from sklearn.neighbors import KNeighborsClassifier
from sklearn.preprocessing import MinMaxScaler

train = np.array([[1, 200], [2, 180], [3, 260], [8, 120], [9, 100], [10, 140], [4, 110], [7, 250]], float)
labels = np.array([0, 0, 0, 1, 1, 1, 1, 0])
test = np.array([[5, 150], [2.5, 120], [8.5, 240], [6, 200], [0, 0], [12, 300]], float)

scaler = MinMaxScaler().fit(train)
knn = KNeighborsClassifier(n_neighbors=3).fit(scaler.transform(train), labels)
print(knn.predict(scaler.transform(test)).tolist())
# distances, to confirm there are no ties at the k-th neighbour
print(np.round(knn.kneighbors(scaler.transform(test))[0], 4).tolist())
